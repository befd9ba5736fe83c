#include "snls/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snls/error.hpp"

namespace snls {

Field::Field(GridPtr grid, double time)
    : grid_(std::move(grid)), values_(grid_->size(), Complex{}), time_(time) {}

Field::Field(GridPtr grid, std::vector<Complex> values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_->size()) {
    throw InvalidParameter("field has " + show(values_.size()) +
                           " values but the grid has " + show(grid_->size()));
  }
  if (!all_finite()) throw InvalidParameter("field contains non-finite values");
}

Field Field::from_function(GridPtr grid, const std::function<Complex(double)>& f, double time) {
  std::vector<Complex> values(grid->size());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = f(grid->x(j));
  return Field(std::move(grid), std::move(values), time);
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool Field::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](const Complex& z) { return z == Complex{}; });
}

Field Field::conj() const {
  Field out(*this);
  for (auto& z : out.values_) z = std::conj(z);
  return out;
}

void Field::check_compatible(const Field& other) const {
  if (grid_ != other.grid_ && !(*grid_ == *other.grid_)) {
    throw InvalidParameter("fields live on different grids");
  }
}

Field& Field::operator+=(const Field& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_compatible(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(Complex scale) noexcept {
  for (auto& z : values_) z *= scale;
  return *this;
}

RealField::RealField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw InvalidParameter("real field size does not match grid");
}

double RealField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace snls
