#pragma once

#include <memory>
#include <string>

#include "snls/harness/config.hpp"
#include "snls/harness/table.hpp"
#include "snls/noise.hpp"

namespace snls::harness {

/// The noise model described by the run configuration, or null when noise is
/// disabled or of rank zero.
std::shared_ptr<const NoiseModel> make_noise(const RunConfig& cfg, const GridPtr& grid);

/// One member of the approximation family on the run's time grid.
SolverConfig member_config(const RunConfig& cfg, double epsilon, double mu, ExtendedReal scale,
                           double offset, std::shared_ptr<const NoiseModel> noise);

/// Every datum x coupling x epsilon x m x offset, every path when noisy:
/// norms, mass drift and stopping time. PASS when all runs finish and the
/// relative mass drift stays below 1e-10 (deterministic) or 1e-9 (noisy).
ExperimentResult solve_experiment(const RunConfig& cfg);

/// L^rho_omega estimates of the X and X_2 norms over the parameter grid and
/// the bank, plus the deterministic slice. PASS when every value is finite,
/// the fitted growth of log X_2 as epsilon -> 0 is at most two paired
/// bootstrap standard errors for every (datum, mu, m, A), and the
/// deterministic max/min ratio over (epsilon, m, A) is below 1.5 for every
/// (datum, mu).
ExperimentResult uniform_bound_experiment(const RunConfig& cfg);

/// D(m, eps) = ||u_{m,eps} - u_ref||_X with u_ref the (max m, min eps) run,
/// under common noise. Uses the first family at the largest norm and the
/// largest coupling.
/// PASS when D is nonincreasing toward the corner along the row m = max m
/// (eps decreasing) and the column eps = min eps (m increasing), in both the
/// Monte Carlo estimate and the deterministic slice, and the corner agrees
/// with an independent critical (m = inf, eps = 0) run within two standard
/// errors.
ExperimentResult double_limit_experiment(const RunConfig& cfg);

/// For each (m1 < m2) pair and path, with common increments: ordering of the
/// stopping times and the largest L^2 gap up to tau_{m1}. PASS when there are
/// no ordering violations and the gap stays below 1e-10.
ExperimentResult stopping_time_experiment(const RunConfig& cfg);

/// Response ratios for initial-data, forcing and offset perturbations over
/// the configured decades, deterministic and on one noise path. PASS when
/// each channel's ratio varies by less than a factor 2 across decades and
/// the forcing ratio is within a factor 3 of the initial-data ratio.
ExperimentResult stability_suite(const RunConfig& cfg);

/// Dispersive decay fits of a Gaussian for each configured exponent. PASS
/// when every fitted exponent is within 0.05 of 1/2 - 1/p (0.02 for p = 2).
ExperimentResult dispersive_suite(const RunConfig& cfg);

/// Group unitarity and inverse, Strichartz invariance under transport,
/// scale covariance at eps = 0, mass decoupling and Strichartz-product decay.
ExperimentResult symmetry_suite(const RunConfig& cfg);

/// F_Phi basis independence, increment moments and scaling, step
/// independence, boundary decay and the pointwise Ito drift E e^{-iW}.
ExperimentResult noise_suite(const RunConfig& cfg);

/// Runs the experiment behind a CLI subcommand name. Throws InvalidParameter
/// for unknown names.
ExperimentResult run_experiment(const std::string& name, const RunConfig& cfg);

}  // namespace snls::harness
