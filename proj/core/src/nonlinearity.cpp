#include "snls/nonlinearity.hpp"

#include <cmath>

#include "snls/error.hpp"

namespace snls {
namespace {

double psi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

NonlinearityExponent::NonlinearityExponent(double epsilon, double mu)
    : epsilon_(epsilon), mu_(mu) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidParameter("epsilon must lie in [0, 1]");
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidParameter("mu must lie in [0, 1]");
}

double nonlinear_rate(Complex z, const NonlinearityExponent& exponent) noexcept {
  const double a2 = std::norm(z);
  if (a2 == 0.0) return 0.0;
  double rate;
  if (exponent.epsilon() == 0.0) {
    rate = a2 * a2;
  } else {
    rate = std::pow(a2, 0.5 * exponent.power());
  }
  return exponent.mu() * rate;
}

Field apply_nonlinearity(const Field& f, const NonlinearityExponent& exponent) {
  Field out(f);
  for (auto& z : out.values()) z *= nonlinear_rate(z, exponent);
  return out;
}

double theta(double x, CutoffProfile profile) {
  if (!(x >= 0.0)) throw InvalidParameter("theta is defined on [0, inf)");
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  if (profile == CutoffProfile::kSmoothstep) {
    const double s = x - 1.0;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  }
  const double a = psi(2.0 - x);
  const double b = psi(x - 1.0);
  return a / (a + b);
}

CutoffSpec::CutoffSpec(ExtendedReal scale, double offset, CutoffProfile profile)
    : scale_(scale), offset_(offset), profile_(profile) {
  if (!scale.is_infinite() && !(scale.value() > 0.0)) {
    throw InvalidParameter("truncation scale m must be positive");
  }
  if (!(offset >= 0.0) || !std::isfinite(offset)) {
    throw InvalidParameter("truncation offset A must be finite and >= 0");
  }
}

double CutoffSpec::theta_m(double x) const {
  if (scale_.is_infinite()) return 1.0;
  return theta(x / scale_.value(), profile_);
}

double truncation_factor(const StrichartzAccumulator& acc, const CutoffSpec& cut) {
  if (!(acc.power_integral >= 0.0)) throw InvalidParameter("accumulator must be nonnegative");
  return cut.theta_m(cut.offset() + acc.power_integral);
}

void nonlinear_phase_step(Field& u, const NonlinearityExponent& exponent, double factor,
                          double dt) {
  const double scale = factor * dt;
  if (scale == 0.0 || exponent.mu() == 0.0) return;
  for (auto& z : u.values()) z *= std::polar(1.0, -scale * nonlinear_rate(z, exponent));
}

}  // namespace snls
