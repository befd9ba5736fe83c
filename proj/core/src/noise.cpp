#include "snls/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "snls/error.hpp"
#include "snls/propagator.hpp"
#include "snls/rng.hpp"

namespace snls {
namespace {

double discrete_dot(const RealField& a, const RealField& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a.values[j] * b.values[j];
  return s * a.grid->dx();
}

// Modified Gram-Schmidt, applied twice for orthogonality at roundoff level.
void orthonormalize(std::vector<RealField>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      for (std::size_t l = 0; l < k; ++l) {
        const double c = discrete_dot(basis[l], basis[k]);
        for (std::size_t j = 0; j < basis[k].size(); ++j) {
          basis[k].values[j] -= c * basis[l].values[j];
        }
      }
      const double norm = std::sqrt(discrete_dot(basis[k], basis[k]));
      if (!(norm > 0.0)) throw ResolutionError("noise basis function vanishes on the grid");
      for (auto& v : basis[k].values) v /= norm;
    }
  }
}

// Hermite functions h_0 .. h_{count-1} at y, orthonormal on the real line.
std::vector<double> hermite_functions(std::size_t count, double y) {
  std::vector<double> h(count);
  if (count == 0) return h;
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
  if (count > 1) h[1] = std::numbers::sqrt2 * y * h[0];
  for (std::size_t n = 1; n + 1 < count; ++n) {
    const auto nd = static_cast<double>(n);
    h[n + 1] = std::sqrt(2.0 / (nd + 1.0)) * y * h[n] - std::sqrt(nd / (nd + 1.0)) * h[n - 1];
  }
  return h;
}

void check_resolved(const RealField& f, const std::string& what) {
  const SpectralGrid& grid = *f.grid;
  const double peak = f.max_abs();
  const double edge = grid.half_length() * 0.875;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (std::abs(grid.x(j)) >= edge && std::abs(f.values[j]) > 1e-12 * peak) {
      throw ResolutionError(what + " does not decay inside the box");
    }
  }
  Field complex_view(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) complex_view[j] = f.values[j];
  const auto spec = spectrum_of(complex_view);
  const auto k = grid.wavenumbers();
  double total = 0.0, high = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double e = std::norm(spec[j]);
    total += e;
    if (std::abs(k[j]) > 0.5 * grid.nyquist()) high += e;
  }
  if (high > 1e-14 * total) throw ResolutionError(what + " is not resolved by the grid");
}

}  // namespace

NoiseModel::NoiseModel(GridPtr grid) : grid_(grid), correction_(grid) {}

NoiseModel::NoiseModel(GridPtr grid, std::vector<RealField> input_basis,
                       std::vector<RealField> modes, std::vector<double> singular_values,
                       int weight_exponent, int smoothness)
    : grid_(grid),
      input_basis_(std::move(input_basis)),
      modes_(std::move(modes)),
      singular_values_(std::move(singular_values)),
      weight_exponent_(weight_exponent),
      smoothness_(smoothness),
      correction_(grid) {
  const std::size_t r = singular_values_.size();
  if (input_basis_.size() != r || modes_.size() != r) {
    throw InvalidParameter("noise model: basis, modes and singular values differ in length");
  }
  if (weight_exponent < 0 || smoothness < 0) {
    throw InvalidParameter("noise model: weight exponents must be >= 0");
  }
  for (std::size_t k = 0; k < r; ++k) {
    if (!(singular_values_[k] > 0.0)) throw InvalidParameter("singular values must be positive");
    if (k > 0 && !(singular_values_[k] < singular_values_[k - 1])) {
      throw InvalidParameter("singular values must be strictly decreasing");
    }
    if (input_basis_[k].size() != grid_->size() || modes_[k].size() != grid_->size()) {
      throw InvalidParameter("noise model: function sampled on the wrong grid");
    }
  }
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = 0; l <= k; ++l) {
      const double expected = k == l ? 1.0 : 0.0;
      if (std::abs(discrete_dot(input_basis_[k], input_basis_[l]) - expected) > 1e-12) {
        throw InvalidParameter("noise input basis is not orthonormal");
      }
    }
  }
  correction_ = ito_stratonovich_correction(*this);
}

double NoiseModel::trace() const noexcept {
  double s = 0.0;
  for (double c : singular_values_) s += c;
  return s;
}

RealField NoiseModel::apply(const RealField& input) const {
  RealField out(grid_);
  for (std::size_t k = 0; k < rank(); ++k) {
    const double coeff = singular_values_[k] * discrete_dot(input_basis_[k], input);
    for (std::size_t j = 0; j < out.size(); ++j) out.values[j] += coeff * modes_[k].values[j];
  }
  return out;
}

NoiseModel build_noise_model(const GridPtr& grid, const NoiseModelParams& params) {
  if (params.rank == 0) return NoiseModel(grid);
  if (!(params.decay > 1.0)) throw InvalidParameter("noise decay exponent must exceed 1");
  if (!(params.width > 0.0)) throw InvalidParameter("noise width must be positive");
  if (!(params.amplitude > 0.0)) throw InvalidParameter("noise amplitude must be positive");
  if (params.rank - 1 > grid->size() / 8) {
    throw ResolutionError("noise rank " + show(params.rank) +
                          " exceeds what the grid resolves");
  }

  const std::size_t r = params.rank;
  std::vector<RealField> inputs(r, RealField(grid));
  std::vector<RealField> modes(r, RealField(grid));
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double x = grid->x(j);
    const auto e = hermite_functions(r, x);
    const auto g = hermite_functions(r, x / params.width);
    const double envelope = std::exp(-x * x / (2.0 * params.width * params.width));
    for (std::size_t k = 0; k < r; ++k) {
      inputs[k].values[j] = e[k];
      modes[k].values[j] = envelope * g[k];
    }
  }
  for (std::size_t k = 0; k < r; ++k) {
    check_resolved(inputs[k], "noise input function " + show(k + 1));
    check_resolved(modes[k], "noise mode " + show(k + 1));
  }
  orthonormalize(inputs);
  orthonormalize(modes);

  std::vector<double> c(r);
  for (std::size_t k = 0; k < r; ++k) {
    c[k] = params.amplitude * std::pow(1.0 + static_cast<double>(k + 1), -params.decay);
  }
  return NoiseModel(grid, std::move(inputs), std::move(modes), std::move(c),
                    params.weight_exponent, params.smoothness);
}

RealField ito_stratonovich_correction(const NoiseModel& model) {
  RealField f(model.grid());
  for (std::size_t k = 0; k < model.rank(); ++k) {
    const double c = model.singular_values()[k];
    const auto& g = model.modes()[k].values;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double v = c * g[j];
      f.values[j] += v * v;
    }
  }
  return f;
}

double weighted_sobolev_norm(const RealField& f, int weight_exponent, int smoothness) {
  Field u(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) u[j] = f.values[j];
  double total = 0.0;
  for (int order = 0; order <= smoothness; ++order) {
    const Field d = spectral_derivative(u, order);
    double s = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double w = 1.0 + std::pow(std::abs(f.grid->x(j)), weight_exponent);
      s += w * w * std::norm(d[j]);
    }
    total += std::sqrt(s * f.grid->dx());
  }
  return total;
}

NoiseIncrement reconstruct_increment(const NoiseModel& model, double dt,
                                     std::vector<double> gaussians) {
  if (!(dt > 0.0)) throw InvalidParameter("noise increment needs dt > 0");
  if (gaussians.size() != model.rank()) throw InvalidParameter("wrong number of gaussians");
  NoiseIncrement inc{RealField(model.grid()), dt, std::move(gaussians)};
  const double sdt = std::sqrt(dt);
  for (std::size_t k = 0; k < model.rank(); ++k) {
    const double a = sdt * model.singular_values()[k] * inc.gaussians[k];
    const auto& g = model.modes()[k].values;
    for (std::size_t j = 0; j < inc.delta_w.size(); ++j) inc.delta_w.values[j] += a * g[j];
  }
  return inc;
}

NoiseIncrement sample_increment(const NoiseModel& model, double dt, NoiseStream& stream) {
  auto engine = substream(stream.seed, stream.path, stream.step);
  ++stream.step;
  std::normal_distribution<double> normal;
  std::vector<double> xi(model.rank());
  for (auto& v : xi) v = normal(engine);
  return reconstruct_increment(model, dt, std::move(xi));
}

}  // namespace snls
