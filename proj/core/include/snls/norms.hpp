#pragma once

#include <limits>

#include "snls/field.hpp"

namespace snls {

/// A real exponent in [1, inf] where infinity is a distinguished value rather
/// than a large float. Constructing from +inf yields the infinite value.
class ExtendedReal {
 public:
  constexpr ExtendedReal(double v)  // NOLINT(google-explicit-constructor)
      : value_(v), infinite_(v == std::numeric_limits<double>::infinity()) {}

  static constexpr ExtendedReal infinity() { return ExtendedReal(Tag{}); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; meaningless when infinite.
  constexpr double value() const noexcept { return value_; }
  /// 1/x with 1/inf := 0.
  constexpr double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  struct Tag {};
  constexpr explicit ExtendedReal(Tag) : value_(0.0), infinite_(true) {}

  double value_;
  bool infinite_;
};

inline constexpr ExtendedReal kInfinity = ExtendedReal::infinity();

/// (sum_j |f_j|^p dx)^{1/p}, or max_j |f_j| for p = inf. Throws for p < 1.
double lebesgue_norm(const Field& f, ExtendedReal p);

/// Squared L^2 norm.
double mass(const Field& f);

/// ||f||_{L^10}^5, the integrand of the X_2 time integral.
double l10_fifth_power(const Field& f);

/// Discrete L^2 inner product <f, g> = sum_j conj(f_j) g_j dx.
Complex inner_product(const Field& f, const Field& g);

/// Fraction of the mass carried by the outer `layer` of the box on each side
/// (layer given as a fraction of L). Zero for the zero field.
double boundary_mass_fraction(const Field& f, double layer = 0.125);

/// True iff q, r >= 2 and 2/q + 1/r = 1/2 (within 1e-12).
bool is_admissible(ExtendedReal q, ExtendedReal r);

/// A Strichartz-admissible exponent pair in one dimension.
class AdmissiblePair {
 public:
  AdmissiblePair(ExtendedReal q, ExtendedReal r);

  static AdmissiblePair energy() { return {kInfinity, 2.0}; }
  static AdmissiblePair x2() { return {5.0, 10.0}; }

  ExtendedReal q() const noexcept { return q_; }
  ExtendedReal r() const noexcept { return r_; }

 private:
  ExtendedReal q_;
  ExtendedReal r_;
};

/// Running integral of ||u(s)||_{L^10}^5 ds (left-endpoint) and running sup of
/// ||u(s)||_{L^2}. Both only ever grow.
struct StrichartzAccumulator {
  double power_integral = 0.0;
  double sup_mass = 0.0;

  void observe(const Field& u);
  /// Adds the contribution of one step [s, s + dt] using the value at s.
  void advance(double l10_fifth_at_left, double dt);
};

}  // namespace snls
