#pragma once

#include <string>
#include <vector>

#include "snls/field.hpp"

namespace snls::harness {

enum class DataFamily {
  kZero,
  kGaussian,           ///< e^{-x^2}
  kModulatedGaussian,  ///< e^{-x^2} e^{2ix}
  kTwoBump,            ///< e^{-(x-3)^2} + i e^{-(x+3)^2}
};

DataFamily parse_family(const std::string& name);
std::string family_name(DataFamily family);

/// One member of the initial-data bank: a shape scaled to ||u0||_{L^2} = norm.
struct InitialDatum {
  DataFamily family = DataFamily::kGaussian;
  double norm = 1.0;

  std::string label() const;
};

Field make_initial_data(const GridPtr& grid, const InitialDatum& datum);

/// Every family at every norm, families outermost.
std::vector<InitialDatum> make_bank(const std::vector<DataFamily>& families,
                                    const std::vector<double>& norms);

}  // namespace snls::harness
