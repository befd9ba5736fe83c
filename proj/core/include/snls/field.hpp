#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "snls/grid.hpp"

namespace snls {

using Complex = std::complex<double>;

/// Complex state u(t, .) sampled on a grid. Value semantics; the grid is shared.
class Field {
 public:
  Field(GridPtr grid, double time = 0.0);
  Field(GridPtr grid, std::vector<Complex> values, double time = 0.0);

  /// Samples `f(x)` at every grid point.
  static Field from_function(GridPtr grid, const std::function<Complex(double)>& f,
                             double time = 0.0);

  const SpectralGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }
  Complex& operator[](std::size_t j) noexcept { return values_[j]; }
  const Complex& operator[](std::size_t j) const noexcept { return values_[j]; }

  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  bool all_finite() const noexcept;
  bool is_zero() const noexcept;

  Field conj() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex scale) noexcept;

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Complex s, Field a) noexcept { return a *= s; }

 private:
  void check_compatible(const Field& other) const;

  GridPtr grid_;
  std::vector<Complex> values_;
  double time_;
};

/// Real-valued function on a grid (noise modes, F_Phi, increments).
struct RealField {
  GridPtr grid;
  std::vector<double> values;

  explicit RealField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
  RealField(GridPtr g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double max_abs() const noexcept;
};

}  // namespace snls
