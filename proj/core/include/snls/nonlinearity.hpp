#pragma once

#include "snls/field.hpp"
#include "snls/norms.hpp"

namespace snls {

/// Exponent and coupling of the defocusing power nonlinearity
/// mu |u|^{4 - epsilon} u, with epsilon, mu in [0, 1].
class NonlinearityExponent {
 public:
  NonlinearityExponent(double epsilon, double mu);

  double epsilon() const noexcept { return epsilon_; }
  double mu() const noexcept { return mu_; }
  /// 4 - epsilon.
  double power() const noexcept { return 4.0 - epsilon_; }

 private:
  double epsilon_;
  double mu_;
};

/// Pointwise mu |f|^{4-eps} f, with 0 mapped to 0.
Field apply_nonlinearity(const Field& f, const NonlinearityExponent& exponent);

/// mu |z|^{4-eps}, the phase rate of the nonlinear flow at a point.
double nonlinear_rate(Complex z, const NonlinearityExponent& exponent) noexcept;

enum class CutoffProfile {
  kBump,        ///< C-infinity partition-of-unity transition (default)
  kSmoothstep,  ///< quintic smoothstep, C^2; for insensitivity checks
};

/// theta: 1 on [0,1], 0 on [2, inf), nonincreasing in between. Throws for x < 0.
double theta(double x, CutoffProfile profile = CutoffProfile::kBump);

/// Truncation scale m (infinite means no truncation), offset A and profile.
class CutoffSpec {
 public:
  CutoffSpec(ExtendedReal scale, double offset = 0.0,
             CutoffProfile profile = CutoffProfile::kBump);
  static CutoffSpec none() { return CutoffSpec(kInfinity); }

  ExtendedReal scale() const noexcept { return scale_; }
  double offset() const noexcept { return offset_; }
  CutoffProfile profile() const noexcept { return profile_; }
  bool is_active() const noexcept { return !scale_.is_infinite(); }

  /// theta_m(x) = theta(x / m); 1 when m is infinite.
  double theta_m(double x) const;

 private:
  ExtendedReal scale_;
  double offset_;
  CutoffProfile profile_;
};

/// theta_m(A + accumulated ||u||^5_{X_2}).
double truncation_factor(const StrichartzAccumulator& acc, const CutoffSpec& cut);

/// Exact flow of i u_t = factor * mu |u|^{4-eps} u over dt:
/// u <- u exp(-i factor mu |u|^{4-eps} dt). |u| is unchanged.
void nonlinear_phase_step(Field& u, const NonlinearityExponent& exponent, double factor,
                          double dt);

}  // namespace snls
