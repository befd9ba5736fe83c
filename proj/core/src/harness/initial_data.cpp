#include "snls/harness/initial_data.hpp"

#include <cmath>

#include "snls/error.hpp"
#include "snls/norms.hpp"

namespace snls::harness {

DataFamily parse_family(const std::string& name) {
  if (name == "zero") return DataFamily::kZero;
  if (name == "gaussian") return DataFamily::kGaussian;
  if (name == "modulated_gaussian") return DataFamily::kModulatedGaussian;
  if (name == "two_bump") return DataFamily::kTwoBump;
  throw ConfigError("unknown initial-data family '" + name + "'");
}

std::string family_name(DataFamily family) {
  switch (family) {
    case DataFamily::kZero: return "zero";
    case DataFamily::kGaussian: return "gaussian";
    case DataFamily::kModulatedGaussian: return "modulated_gaussian";
    case DataFamily::kTwoBump: return "two_bump";
  }
  return "unknown";
}

std::string InitialDatum::label() const { return family_name(family) + "@" + show(norm); }

Field make_initial_data(const GridPtr& grid, const InitialDatum& datum) {
  if (!(datum.norm >= 0.0)) throw InvalidParameter("initial-data norm must be nonnegative");
  Field f(grid);
  switch (datum.family) {
    case DataFamily::kZero:
      return f;
    case DataFamily::kGaussian:
      f = Field::from_function(grid, [](double x) { return Complex(std::exp(-x * x)); });
      break;
    case DataFamily::kModulatedGaussian:
      f = Field::from_function(grid, [](double x) { return std::exp(-x * x) * std::polar(1.0, 2.0 * x); });
      break;
    case DataFamily::kTwoBump:
      f = Field::from_function(grid, [](double x) {
        return Complex(std::exp(-(x - 3.0) * (x - 3.0)), std::exp(-(x + 3.0) * (x + 3.0)));
      });
      break;
  }
  f *= datum.norm / lebesgue_norm(f, 2.0);
  return f;
}

std::vector<InitialDatum> make_bank(const std::vector<DataFamily>& families,
                                    const std::vector<double>& norms) {
  std::vector<InitialDatum> bank;
  for (DataFamily f : families) {
    for (double n : norms) bank.push_back({f, n});
  }
  return bank;
}

}  // namespace snls::harness
