#include "snls/integrator.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "snls/error.hpp"
#include "snls/fft.hpp"
#include "snls/nonlinearity.hpp"
#include "snls/propagator.hpp"

namespace snls {
namespace {

std::vector<Complex> free_multiplier(const SpectralGrid& grid, double t) {
  const auto k = grid.wavenumbers();
  std::vector<Complex> m(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) m[j] = std::polar(1.0, -k[j] * k[j] * t);
  return m;
}

void linear_substep(Field& u, std::span<const Complex> multiplier) {
  auto& fft = SpectralTransform::local(u.size());
  fft.forward(u.values(), u.values());
  auto v = u.values();
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= multiplier[j];
  fft.inverse(u.values(), u.values());
}

// Nonlinear phase and Stratonovich noise phase in one pass; both leave |u|
// unchanged, so they commute exactly.
void pointwise_substep(Field& u, const NonlinearityExponent& exponent, double factor, double dt,
                       const RealField* delta_w) {
  const double scale = factor * dt * exponent.mu();
  if (scale == 0.0 && delta_w == nullptr) return;
  auto v = u.values();
  for (std::size_t j = 0; j < v.size(); ++j) {
    double phase = scale == 0.0 ? 0.0 : factor * dt * nonlinear_rate(v[j], exponent);
    if (delta_w != nullptr) phase += delta_w->values[j];
    v[j] *= std::polar(1.0, -phase);
  }
}

void forcing_substep(Field& u, const Field& forcing, double dt) {
  auto v = u.values();
  const auto e = forcing.values();
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= Complex(0.0, dt) * e[j];
}

void split_step(Field& u, const SolverConfig& cfg, double factor,
                std::span<const Complex> half, std::span<const Complex> full,
                const RealField* delta_w, const Field* forcing) {
  if (cfg.scheme == Scheme::kStrang) {
    linear_substep(u, half);
    pointwise_substep(u, cfg.exponent, factor, cfg.dt, delta_w);
    if (forcing != nullptr) forcing_substep(u, *forcing, cfg.dt);
    linear_substep(u, half);
  } else {
    linear_substep(u, full);
    pointwise_substep(u, cfg.exponent, factor, cfg.dt, delta_w);
    if (forcing != nullptr) forcing_substep(u, *forcing, cfg.dt);
  }
}

const RealField* active_increment(const SolverConfig& cfg, const NoiseIncrement* increment) {
  if (increment == nullptr) return nullptr;
  if (std::abs(increment->dt - cfg.dt) > 1e-12 * cfg.dt) {
    throw InvalidParameter("noise increment dt does not match the solver dt");
  }
  // A rank-zero increment is identically zero; skipping it keeps the
  // deterministic and zero-noise paths bitwise identical.
  return increment->gaussians.empty() ? nullptr : &increment->delta_w;
}

bool finite_field(const Field& u) { return u.all_finite(); }

Field single_step(const Field& f, const SolverConfig& cfg, StrichartzAccumulator& acc,
                  const NoiseIncrement* increment) {
  const double factor = truncation_factor(acc, cfg.cutoff);
  acc.observe(f);
  acc.advance(l10_fifth_power(f), cfg.dt);
  Field u(f);
  const auto half = free_multiplier(f.grid(), 0.5 * cfg.dt);
  const auto full = free_multiplier(f.grid(), cfg.dt);
  split_step(u, cfg, factor, half, full, active_increment(cfg, increment), nullptr);
  u.set_time(f.time() + cfg.dt);
  if (!finite_field(u)) throw BlowUp("non-finite values after step", u.time());
  acc.observe(u);
  return u;
}

}  // namespace

Stepper::Stepper(Field initial, SolverConfig config)
    : state_(std::move(initial)),
      config_(std::move(config)),
      total_steps_(config_.steps()),
      half_multiplier_(free_multiplier(state_.grid(), 0.5 * config_.dt)),
      full_multiplier_(free_multiplier(state_.grid(), config_.dt)),
      l10_fifth_(l10_fifth_power(state_)),
      initial_mass_(mass(state_)) {
  if (!state_.all_finite()) throw InvalidParameter("initial data must be finite");
  if (config_.noise && !(*config_.noise->grid() == state_.grid())) {
    throw InvalidParameter("noise model and initial data live on different grids");
  }
  acc_.observe(state_);
}

void Stepper::advance(const NoiseIncrement* increment, const Field* forcing) {
  if (done()) throw InvalidParameter("stepper already reached the horizon");
  if (config_.stochastic() != (increment != nullptr)) {
    throw InvalidParameter(config_.stochastic() ? "stochastic step needs a noise increment"
                                                : "deterministic step given a noise increment");
  }
  const double start = state_.time() - static_cast<double>(steps_taken_) * config_.dt;
  last_factor_ = truncation_factor(acc_, config_.cutoff);
  acc_.advance(l10_fifth_, config_.dt);
  if (forcing != nullptr) forced_ = true;
  split_step(state_, config_, last_factor_, half_multiplier_, full_multiplier_,
             active_increment(config_, increment), forcing);
  ++steps_taken_;
  state_.set_time(start + static_cast<double>(steps_taken_) * config_.dt);

  if (!finite_field(state_)) throw BlowUp("non-finite values after step", state_.time());
  l10_fifth_ = l10_fifth_power(state_);
  const double m = mass(state_);
  acc_.sup_mass = std::max(acc_.sup_mass, std::sqrt(m));
  if (!forced_ && initial_mass_ > 0.0 &&
      std::abs(m - initial_mass_) > config_.drift_tolerance * initial_mass_) {
    throw BlowUp("mass drift " + show(std::abs(m - initial_mass_) / initial_mass_) +
                     " exceeds tolerance",
                 state_.time());
  }
}

Field step_deterministic(const Field& f, const SolverConfig& cfg, StrichartzAccumulator& acc) {
  return single_step(f, cfg, acc, nullptr);
}

Field step_stochastic(const Field& f, const SolverConfig& cfg, StrichartzAccumulator& acc,
                      const NoiseIncrement& increment) {
  return single_step(f, cfg, acc, &increment);
}

Trajectory solve(const Field& u0, const SolverConfig& cfg, NoiseStream stream) {
  Stepper stepper(u0, cfg);
  Trajectory traj(cfg, u0.time());
  const bool stochastic = cfg.stochastic();
  if (stochastic) traj.noise_path = stream.path;

  const auto monitor = [&](const Field& u) {
    if (cfg.boundary_tolerance <= 0.0) return;
    const double leak = boundary_mass_fraction(u);
    if (leak > cfg.boundary_tolerance) {
      throw BoxTooSmall("boundary mass fraction " + show(leak) + " at t = " +
                        show(u.time()));
    }
  };
  const auto check_stop = [&] {
    if (traj.stopping_time || !cfg.cutoff.is_active()) return;
    if (cfg.cutoff.offset() + traj.accumulated().back() >= cfg.cutoff.scale().value()) {
      traj.stopping_time = traj.step_time(traj.step_count());
    }
  };

  traj.record_state(u0, true);
  monitor(u0);
  check_stop();
  const std::size_t total = stepper.total_steps();
  for (std::size_t n = 1; n <= total; ++n) {
    if (stochastic) {
      NoiseIncrement inc = sample_increment(*cfg.noise, cfg.dt, stream);
      stepper.advance(&inc);
      traj.record_step(stepper.last_factor(), std::move(inc.gaussians));
    } else {
      stepper.advance();
      traj.record_step(stepper.last_factor());
    }
    const bool keep = n % cfg.record_stride == 0 || n == total;
    traj.record_state(stepper.state(), keep);
    if (keep) monitor(stepper.state());
    check_stop();
  }
  return traj;
}

double duhamel_residual(const Trajectory& traj, double t) {
  if (!traj.has_every_state()) {
    throw RangeError("Duhamel residual needs every state (record_stride 1)");
  }
  const auto n = traj.step_index(t);
  if (!n) throw RangeError("t = " + show(t) + " is not a recorded time");

  const SolverConfig& cfg = traj.config();
  const auto& states = traj.snapshots();
  const GridPtr& grid = states.front().grid_ptr();
  const auto k = grid->wavenumbers();
  const double tn = traj.step_time(*n);
  const bool stochastic = cfg.stochastic();

  std::vector<Complex> rhs = spectrum_of(states.front());
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    rhs[j] *= std::polar(1.0, -k[j] * k[j] * (tn - traj.step_time(0)));
  }
  for (std::size_t i = 0; i < *n; ++i) {
    const Field& u = states[i];
    Field integrand(grid);
    const double factor = traj.factors()[i];
    const RealField* dw = nullptr;
    std::optional<NoiseIncrement> inc;
    if (stochastic) {
      inc = reconstruct_increment(*cfg.noise, cfg.dt, traj.gaussians()[i]);
      dw = &inc->delta_w;
    }
    const auto& correction = stochastic ? cfg.noise->correction().values : std::vector<double>{};
    for (std::size_t j = 0; j < integrand.size(); ++j) {
      const Complex z = u[j];
      Complex term = Complex(0.0, -factor * cfg.dt) * (nonlinear_rate(z, cfg.exponent) * z);
      if (dw != nullptr) {
        term += Complex(0.0, -1.0) * (z * dw->values[j]);
        term -= 0.5 * cfg.dt * correction[j] * z;
      }
      integrand[j] = term;
    }
    auto s = spectrum_of(integrand);
    const double lag = tn - traj.step_time(i);
    for (std::size_t j = 0; j < s.size(); ++j) rhs[j] += s[j] * std::polar(1.0, -k[j] * k[j] * lag);
  }
  Field diff = states[*n] - field_from_spectrum(grid, rhs, tn);
  return lebesgue_norm(diff, 2.0);
}

StabilityReport stability_experiment(const Field& w0, const Field& v0, const Forcing& forcing,
                                     const SolverConfig& cfg_w, const SolverConfig& cfg_v,
                                     NoiseStream stream) {
  if (std::abs(cfg_w.dt - cfg_v.dt) > 1e-15 || std::abs(cfg_w.horizon - cfg_v.horizon) > 1e-12) {
    throw InvalidParameter("stability experiment needs matching dt and horizon");
  }
  if (cfg_w.stochastic() != cfg_v.stochastic()) {
    throw InvalidParameter("stability experiment needs both runs deterministic or both noisy");
  }
  Stepper w(w0, cfg_w);
  Stepper v(v0, cfg_v);
  const double dt = cfg_w.dt;

  StabilityReport report;
  report.initial_gap = lebesgue_norm(v0 - w0, 2.0);
  report.offset_gap = std::abs(cfg_v.cutoff.offset() - cfg_w.cutoff.offset());

  double sup_gap = report.initial_gap;
  double x2_integral = 0.0;
  double gap_l10 = l10_fifth_power(v0 - w0);
  while (!w.done()) {
    x2_integral += gap_l10 * dt;
    std::optional<Field> e;
    if (forcing) {
      e = forcing(w.state().time());
      report.forcing_norm += lebesgue_norm(*e, 2.0) * dt;
    }
    if (cfg_w.stochastic()) {
      const NoiseIncrement inc = sample_increment(*cfg_w.noise, dt, stream);
      w.advance(&inc);
      v.advance(&inc, e ? &*e : nullptr);
    } else {
      w.advance();
      v.advance(nullptr, e ? &*e : nullptr);
    }
    const Field gap = v.state() - w.state();
    sup_gap = std::max(sup_gap, lebesgue_norm(gap, 2.0));
    gap_l10 = l10_fifth_power(gap);
  }
  report.response_x1 = sup_gap;
  report.response_x2 = std::pow(x2_integral, 0.2);
  report.response = report.response_x1 + report.response_x2;
  const double inputs = report.input_size();
  report.ratio = inputs > 0.0 ? report.response / inputs : 0.0;
  return report;
}

}  // namespace snls
