#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "snls/field.hpp"
#include "snls/trajectory.hpp"

namespace snls {

/// Parameters of the unitary group element
///   (g f)(x) = lambda^{-1/2} e^{i x xi} (e^{-i t0 / lambda^2 Delta} f)((x - x0) / lambda).
struct SymmetryParams {
  double x0 = 0.0;       ///< translation
  double xi0 = 0.0;      ///< frequency shift
  double lambda0 = 1.0;  ///< scale, > 0
  double t0 = 0.0;       ///< time slide
};

/// Limits beyond which group actions are rejected instead of aliased.
struct ResolutionGuard {
  double lambda_min = 1.0 / 16.0;
  double lambda_max = 16.0;
  /// |xi0| <= xi_fraction * Nyquist wavenumber (pi N / (8 L) for 1/4).
  double xi_fraction = 0.25;
  /// Largest tolerated mass fraction in the outer eighth of the box and
  /// spectral energy fraction above 3/4 of the Nyquist wavenumber.
  double tolerance = 1e-10;
};

/// Band-limited periodic interpolation of f at arbitrary points; points
/// outside [-L, L) evaluate to 0 (f is treated as supported in the box).
std::vector<Complex> spectral_interpolate(const Field& f, std::span<const double> points);

/// Applies g_{x0, xi0, lambda0, t0}. Throws ResolutionError outside the guard.
Field group_apply(const Field& f, const SymmetryParams& p, const ResolutionGuard& guard = {});
/// Applies the inverse group element.
Field group_apply_inverse(const Field& g, const SymmetryParams& p,
                          const ResolutionGuard& guard = {});

/// Phi(t, x) = lambda^{-1/2} e^{i x xi} e^{-i t xi^2} Psi((t - t0)/lambda^2, (x - x0 - 2 xi t)/lambda)
/// sampled at the images t = t0 + lambda^2 s of the snapshot times s of Psi.
/// The result has one step per snapshot of `psi` (which must be equispaced).
Trajectory transported_solution(const Trajectory& psi, const SymmetryParams& p,
                                const ResolutionGuard& guard = {});

/// f_n = sum_j g_{j,n} phi_j + omega_n.
struct ProfileSet {
  std::vector<Field> profiles;
  std::vector<std::function<SymmetryParams(int n)>> parameters;  ///< one per profile
  std::function<Field(int n)> remainder;                        ///< empty: zero remainder

  Field transformed_profile(std::size_t j, int n, const ResolutionGuard& guard = {}) const;
};

Field synthesize_sequence(const ProfileSet& ps, int n, const ResolutionGuard& guard = {});

/// | ||f_n||^2 - sum_j ||phi_j||^2 - ||omega_n||^2 |.
double mass_defect(const ProfileSet& ps, int n, const ResolutionGuard& guard = {});

/// || e^{itD}(g_{j,n} phi_j) e^{itD}(g_{j',n} phi_{j'}) ||_{L^{5/2}_t L^5_x(0, horizon)},
/// left-endpoint sum over `steps` time samples.
double pairwise_strichartz_product(const ProfileSet& ps, std::size_t j, std::size_t j_prime,
                                   int n, double horizon, std::size_t steps,
                                   const ResolutionGuard& guard = {});

/// ||e^{itD} omega_n||_{L^5_t L^10_x(0, horizon)}; 0 without a remainder.
double remainder_strichartz_norm(const ProfileSet& ps, int n, double horizon, std::size_t steps);

}  // namespace snls
