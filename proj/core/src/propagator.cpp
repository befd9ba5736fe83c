#include "snls/propagator.hpp"

#include <cmath>
#include <span>

#include "snls/error.hpp"
#include "snls/fft.hpp"

namespace snls {
namespace {

void apply_free_multiplier(std::span<Complex> spectrum, std::span<const double> k, double t) {
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    spectrum[j] *= std::polar(1.0, -k[j] * k[j] * t);
  }
}

}  // namespace

std::vector<Complex> spectrum_of(const Field& f) {
  std::vector<Complex> out(f.size());
  SpectralTransform::local(f.size()).forward(f.values(), out);
  return out;
}

Field field_from_spectrum(GridPtr grid, std::span<const Complex> spectrum, double time) {
  Field out(std::move(grid), time);
  SpectralTransform::local(out.size()).inverse(spectrum, out.values());
  return out;
}

Field spectral_derivative(const Field& f, int order) {
  if (order < 0) throw InvalidParameter("derivative order must be >= 0");
  if (order == 0) return f;
  auto s = spectrum_of(f);
  const auto k = f.grid().wavenumbers();
  for (std::size_t j = 0; j < s.size(); ++j) s[j] *= std::pow(Complex(0.0, k[j]), order);
  return field_from_spectrum(f.grid_ptr(), s, f.time());
}

void free_evolve_in_place(Field& f, double t) {
  if (!f.all_finite()) throw InvalidParameter("free_evolve: non-finite input");
  if (t != 0.0) {
    auto& fft = SpectralTransform::local(f.size());
    fft.forward(f.values(), f.values());
    apply_free_multiplier(f.values(), f.grid().wavenumbers(), t);
    fft.inverse(f.values(), f.values());
  }
  f.set_time(f.time() + t);
}

Field free_evolve(const Field& f, double t) {
  Field out(f);
  free_evolve_in_place(out, t);
  return out;
}

LinearFlow::LinearFlow(const Field& initial) : initial_(initial), spectrum_(spectrum_of(initial)) {
  if (!initial.all_finite()) throw InvalidParameter("LinearFlow: non-finite input");
}

Field LinearFlow::at(double t) const {
  if (t == 0.0) return initial_;
  std::vector<Complex> s(spectrum_);
  apply_free_multiplier(s, initial_.grid().wavenumbers(), t);
  return field_from_spectrum(initial_.grid_ptr(), s, initial_.time() + t);
}

DispersiveFitReport check_dispersive_decay(const Field& f, double p, double t_min, double t_max,
                                           std::size_t samples, double boundary_tolerance) {
  if (!(p >= 1.0 && p <= 2.0)) throw InvalidParameter("dispersive check needs p in [1, 2]");
  if (!(t_min > 0.0 && t_max > t_min)) throw InvalidParameter("need 0 < t_min < t_max");
  if (samples < 2) throw InvalidParameter("need at least two time samples");
  if (f.is_zero() || mass(f) == 0.0) throw DegenerateFit("dispersive fit of the zero field");

  const ExtendedReal dual = p == 1.0 ? kInfinity : ExtendedReal(p / (p - 1.0));
  DispersiveFitReport report;
  report.expected_exponent = 0.5 - 1.0 / p;
  LinearFlow flow(f);
  const double log_ratio = std::log(t_max / t_min);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t =
        t_min * std::exp(log_ratio * static_cast<double>(i) / static_cast<double>(samples - 1));
    const Field u = flow.at(t);
    const double leak = boundary_mass_fraction(u);
    if (leak > boundary_tolerance) {
      throw BoxTooSmall("dispersed mass reached the box boundary at t = " + show(t) +
                        " (fraction " + show(leak) + ")");
    }
    report.times.push_back(t);
    report.norms.push_back(lebesgue_norm(u, dual));
  }

  const auto n = static_cast<double>(samples);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    if (!(report.norms[i] > 0.0)) throw DegenerateFit("non-positive norm in dispersive fit");
    const double lx = std::log(report.times[i]);
    const double ly = std::log(report.norms[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = std::log(report.norms[i]) - intercept - slope * std::log(report.times[i]);
    ss += r * r;
  }
  report.fitted_exponent = slope;
  report.fit_residual = std::sqrt(ss / n);
  return report;
}

double linear_strichartz_norm(const Field& f, const AdmissiblePair& pair, double horizon,
                              std::size_t steps) {
  if (!(horizon > 0.0) || steps == 0) throw InvalidParameter("need horizon > 0 and steps > 0");
  LinearFlow flow(f);
  const double h = horizon / static_cast<double>(steps);
  if (pair.q().is_infinite()) {
    double sup = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) {
      sup = std::max(sup, lebesgue_norm(flow.at(h * static_cast<double>(i)), pair.r()));
    }
    return sup;
  }
  const double q = pair.q().value();
  double sum = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    sum += std::pow(lebesgue_norm(flow.at(h * static_cast<double>(i)), pair.r()), q) * h;
  }
  return std::pow(sum, 1.0 / q);
}

double strichartz_ratio(const Field& f, const AdmissiblePair& pair, double horizon,
                        std::size_t steps) {
  const double l2 = lebesgue_norm(f, 2.0);
  if (l2 == 0.0) throw InvalidParameter("Strichartz ratio undefined for f = 0");
  return linear_strichartz_norm(f, pair, horizon, steps) / l2;
}

}  // namespace snls
