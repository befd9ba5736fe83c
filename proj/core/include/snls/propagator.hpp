#pragma once

#include <cstddef>
#include <vector>

#include "snls/field.hpp"
#include "snls/norms.hpp"

namespace snls {

/// Forward transform of a field (unnormalized, FFT order).
std::vector<Complex> spectrum_of(const Field& f);
/// Inverse of `spectrum_of`.
Field field_from_spectrum(GridPtr grid, std::span<const Complex> spectrum, double time);

/// d^order f / dx^order via the multiplier (ik)^order.
Field spectral_derivative(const Field& f, int order);

/// e^{it Delta} as the exact multiplier e^{-i k^2 t}. The result carries time
/// f.time() + t.
Field free_evolve(const Field& f, double t);
void free_evolve_in_place(Field& f, double t);

/// Linear solution e^{it Delta} f evaluated at arbitrary times with a single
/// cached forward transform.
class LinearFlow {
 public:
  explicit LinearFlow(const Field& initial);
  Field at(double t) const;
  const Field& initial() const noexcept { return initial_; }

 private:
  Field initial_;
  std::vector<Complex> spectrum_;
};

struct DispersiveFitReport {
  std::vector<double> times;
  std::vector<double> norms;  ///< ||e^{it Delta} f||_{L^{p'}} at `times`
  double fitted_exponent = 0.0;
  double expected_exponent = 0.0;  ///< 1/2 - 1/p
  double fit_residual = 0.0;       ///< RMS residual of the log-log fit
};

/// Fits log ||e^{itDelta} f||_{L^{p'}} against log t over `samples`
/// geometrically spaced times in [t_min, t_max].
///
/// Throws BoxTooSmall when more than `boundary_tolerance` of the mass reaches
/// the outer eighth of the box at any sample, DegenerateFit for f = 0.
DispersiveFitReport check_dispersive_decay(const Field& f, double p, double t_min, double t_max,
                                           std::size_t samples,
                                           double boundary_tolerance = 1e-10);

/// ||e^{it Delta} f||_{L^q_t L^r_x(0, horizon)} with a left-endpoint sum over
/// `steps` equal subintervals (sup over steps+1 samples when q = inf).
double linear_strichartz_norm(const Field& f, const AdmissiblePair& pair, double horizon,
                              std::size_t steps);

/// linear_strichartz_norm / ||f||_{L^2}. Throws InvalidParameter for f = 0.
double strichartz_ratio(const Field& f, const AdmissiblePair& pair, double horizon,
                        std::size_t steps);

}  // namespace snls
