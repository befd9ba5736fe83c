#include "snls/symmetry.hpp"

#include <cmath>
#include <string>

#include "snls/error.hpp"
#include "snls/norms.hpp"
#include "snls/propagator.hpp"

namespace snls {
namespace {

void check_params(const Field& f, const SymmetryParams& p, const ResolutionGuard& guard) {
  if (!(p.lambda0 > 0.0)) throw InvalidParameter("symmetry scale lambda0 must be positive");
  if (p.lambda0 < guard.lambda_min || p.lambda0 > guard.lambda_max) {
    throw ResolutionError("scale lambda0 = " + show(p.lambda0) +
                          " outside the resolvable range");
  }
  if (std::abs(p.xi0) > guard.xi_fraction * f.grid().nyquist()) {
    throw ResolutionError("frequency shift xi0 = " + show(p.xi0) +
                          " exceeds the resolvable range");
  }
}

void check_resolved(const Field& u, const ResolutionGuard& guard) {
  const double total = mass(u);
  if (total == 0.0) return;
  if (boundary_mass_fraction(u) > guard.tolerance) {
    throw ResolutionError("transformed field reaches the box boundary");
  }
  const auto s = spectrum_of(u);
  const auto k = u.grid().wavenumbers();
  double all = 0.0, high = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double e = std::norm(s[j]);
    all += e;
    if (std::abs(k[j]) > 0.75 * u.grid().nyquist()) high += e;
  }
  if (high > guard.tolerance * all) {
    throw ResolutionError("transformed field oscillates beyond the grid resolution");
  }
}

// out(x) = amplitude * e^{i (x xi + phase)} h((x - shift) / scale).
Field affine_resample(const Field& h, double shift, double scale, double xi, double phase,
                      double amplitude) {
  const SpectralGrid& grid = h.grid();
  Field out(h.grid_ptr(), h.time());
  if (scale == 1.0) {
    // Pure translation: exact Fourier shift.
    auto s = spectrum_of(h);
    const auto k = grid.wavenumbers();
    for (std::size_t j = 0; j < s.size(); ++j) s[j] *= std::polar(1.0, -k[j] * shift);
    out = field_from_spectrum(h.grid_ptr(), s, h.time());
  } else {
    std::vector<double> points(grid.size());
    for (std::size_t j = 0; j < points.size(); ++j) points[j] = (grid.x(j) - shift) / scale;
    const auto values = spectral_interpolate(h, points);
    for (std::size_t j = 0; j < values.size(); ++j) out[j] = values[j];
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] *= amplitude * std::polar(1.0, grid.x(j) * xi + phase);
  }
  return out;
}

}  // namespace

std::vector<Complex> spectral_interpolate(const Field& f, std::span<const double> points) {
  const SpectralGrid& grid = f.grid();
  const auto s = spectrum_of(f);
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  const double dk = grid.wavenumber_spacing();
  const double len = grid.half_length();
  const double inv_n = 1.0 / static_cast<double>(n);
  constexpr std::size_t kResync = 32;

  std::vector<Complex> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double y = points[p];
    if (!(y >= -len && y < len)) continue;
    const double theta = dk * (y + len);
    const Complex w = std::polar(1.0, theta);
    Complex sum = s[0];
    Complex power(1.0, 0.0);
    for (std::size_t m = 1; m < half; ++m) {
      power = m % kResync == 0 ? std::polar(1.0, theta * static_cast<double>(m)) : power * w;
      sum += s[m] * power + s[n - m] * std::conj(power);
    }
    // Nyquist mode split evenly between +-k_N.
    sum += s[half] * std::cos(theta * static_cast<double>(half));
    out[p] = sum * inv_n;
  }
  return out;
}

Field group_apply(const Field& f, const SymmetryParams& p, const ResolutionGuard& guard) {
  check_params(f, p, guard);
  Field h = free_evolve(f, -p.t0 / (p.lambda0 * p.lambda0));
  h.set_time(f.time());
  Field out = affine_resample(h, p.x0, p.lambda0, p.xi0, 0.0, 1.0 / std::sqrt(p.lambda0));
  check_resolved(out, guard);
  return out;
}

Field group_apply_inverse(const Field& g, const SymmetryParams& p, const ResolutionGuard& guard) {
  check_params(g, p, guard);
  // h(y) = lambda^{1/2} e^{-i (lambda y + x0) xi} g(lambda y + x0)
  const double lambda = p.lambda0;
  Field h = affine_resample(g, -p.x0 / lambda, 1.0 / lambda, -p.xi0 * lambda, -p.x0 * p.xi0,
                            std::sqrt(lambda));
  check_resolved(h, guard);
  Field out = free_evolve(h, p.t0 / (lambda * lambda));
  out.set_time(g.time());
  return out;
}

Trajectory transported_solution(const Trajectory& psi, const SymmetryParams& p,
                                const ResolutionGuard& guard) {
  const auto& snaps = psi.snapshots();
  const auto& steps = psi.snapshot_steps();
  if (snaps.empty()) throw RangeError("trajectory has no snapshots to transport");
  check_params(snaps.front(), p, guard);
  const std::size_t stride = steps.size() > 1 ? steps[1] - steps[0] : 1;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i] - steps[i - 1] != stride) {
      throw RangeError("transport needs equispaced snapshots");
    }
  }
  const double l2 = p.lambda0 * p.lambda0;
  SolverConfig cfg = psi.config();
  cfg.dt = l2 * psi.dt() * static_cast<double>(stride);
  cfg.horizon = cfg.dt * static_cast<double>(snaps.size() - 1);
  cfg.record_stride = 1;
  const double start = p.t0 + l2 * snaps.front().time();
  Trajectory out(cfg, start);
  out.noise_path = psi.noise_path;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const double t = start + cfg.dt * static_cast<double>(i);
    Field phi = affine_resample(snaps[i], p.x0 + 2.0 * p.xi0 * t, p.lambda0, p.xi0,
                                -t * p.xi0 * p.xi0, 1.0 / std::sqrt(p.lambda0));
    phi.set_time(t);
    check_resolved(phi, guard);
    if (i > 0) out.record_step(1.0);
    out.record_state(phi, true);
  }
  return out;
}

Field ProfileSet::transformed_profile(std::size_t j, int n, const ResolutionGuard& guard) const {
  if (j >= profiles.size() || j >= parameters.size()) {
    throw InvalidParameter("profile index out of range");
  }
  return group_apply(profiles[j], parameters[j](n), guard);
}

Field synthesize_sequence(const ProfileSet& ps, int n, const ResolutionGuard& guard) {
  if (ps.profiles.empty()) throw InvalidParameter("profile set is empty");
  if (ps.parameters.size() != ps.profiles.size()) {
    throw InvalidParameter("each profile needs a parameter sequence");
  }
  Field f(ps.profiles.front().grid_ptr());
  for (std::size_t j = 0; j < ps.profiles.size(); ++j) f += ps.transformed_profile(j, n, guard);
  if (ps.remainder) f += ps.remainder(n);
  return f;
}

double mass_defect(const ProfileSet& ps, int n, const ResolutionGuard& guard) {
  double parts = 0.0;
  for (const auto& phi : ps.profiles) parts += mass(phi);
  if (ps.remainder) parts += mass(ps.remainder(n));
  return std::abs(mass(synthesize_sequence(ps, n, guard)) - parts);
}

double pairwise_strichartz_product(const ProfileSet& ps, std::size_t j, std::size_t j_prime,
                                   int n, double horizon, std::size_t steps,
                                   const ResolutionGuard& guard) {
  if (!(horizon > 0.0) || steps == 0) throw InvalidParameter("need horizon > 0 and steps > 0");
  const LinearFlow a(ps.transformed_profile(j, n, guard));
  const LinearFlow b(ps.transformed_profile(j_prime, n, guard));
  const double h = horizon / static_cast<double>(steps);
  double sum = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    Field prod = a.at(t);
    const Field other = b.at(t);
    for (std::size_t x = 0; x < prod.size(); ++x) prod[x] *= other[x];
    sum += std::pow(lebesgue_norm(prod, 5.0), 2.5) * h;
  }
  return std::pow(sum, 0.4);
}

double remainder_strichartz_norm(const ProfileSet& ps, int n, double horizon, std::size_t steps) {
  if (!ps.remainder) return 0.0;
  return linear_strichartz_norm(ps.remainder(n), AdmissiblePair::x2(), horizon, steps);
}

}  // namespace snls
