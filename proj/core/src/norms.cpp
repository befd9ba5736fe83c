#include "snls/norms.hpp"

#include <algorithm>
#include <cmath>

#include "snls/error.hpp"

namespace snls {

double lebesgue_norm(const Field& f, ExtendedReal p) {
  if (!p.is_infinite() && !(p.value() >= 1.0)) {
    throw InvalidParameter("Lebesgue exponent must be >= 1");
  }
  if (p.is_infinite()) {
    double m = 0.0;
    for (const auto& z : f.values()) m = std::max(m, std::abs(z));
    return m;
  }
  const double dx = f.grid().dx();
  const double pv = p.value();
  double sum = 0.0;
  if (pv == 2.0) {
    for (const auto& z : f.values()) sum += std::norm(z);
    return std::sqrt(sum * dx);
  }
  for (const auto& z : f.values()) sum += std::pow(std::abs(z), pv);
  return std::pow(sum * dx, 1.0 / pv);
}

double mass(const Field& f) {
  double sum = 0.0;
  for (const auto& z : f.values()) sum += std::norm(z);
  return sum * f.grid().dx();
}

double l10_fifth_power(const Field& f) {
  double sum = 0.0;
  for (const auto& z : f.values()) {
    const double a2 = std::norm(z);
    const double a4 = a2 * a2;
    sum += a4 * a4 * a2;
  }
  return std::sqrt(sum * f.grid().dx());
}

Complex inner_product(const Field& f, const Field& g) {
  if (f.size() != g.size()) throw InvalidParameter("inner product of mismatched fields");
  Complex sum{};
  for (std::size_t j = 0; j < f.size(); ++j) sum += std::conj(f[j]) * g[j];
  return sum * f.grid().dx();
}

double boundary_mass_fraction(const Field& f, double layer) {
  const double total = mass(f);
  if (total == 0.0) return 0.0;
  const double edge = f.grid().half_length() * (1.0 - layer);
  double outer = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (std::abs(f.grid().x(j)) >= edge) outer += std::norm(f[j]);
  }
  return outer * f.grid().dx() / total;
}

bool is_admissible(ExtendedReal q, ExtendedReal r) {
  const auto at_least_two = [](ExtendedReal e) { return e.is_infinite() || e.value() >= 2.0; };
  if (!at_least_two(q) || !at_least_two(r)) return false;
  return std::abs(2.0 * q.reciprocal() + r.reciprocal() - 0.5) <= 1e-12;
}

AdmissiblePair::AdmissiblePair(ExtendedReal q, ExtendedReal r) : q_(q), r_(r) {
  if (!is_admissible(q, r)) throw InvalidParameter("(q, r) is not an admissible pair");
}

void StrichartzAccumulator::observe(const Field& u) {
  sup_mass = std::max(sup_mass, std::sqrt(mass(u)));
}

void StrichartzAccumulator::advance(double l10_fifth_at_left, double dt) {
  power_integral += l10_fifth_at_left * dt;
}

}  // namespace snls
