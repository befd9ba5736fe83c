#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace snls {

/// Short human-readable rendering of a number for diagnostics.
template <typename T>
std::string show(T value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Requested time or interval lies outside what a trajectory recorded.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// The grid cannot represent the requested field (aliasing, oscillation or
/// support beyond the box).
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Mass leaked into the boundary layer of the periodic box.
class BoxTooSmall : public Error {
 public:
  using Error::Error;
};

/// A least-squares fit had no usable data (e.g. identically zero input).
class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or excessive mass drift during time stepping.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A Monte Carlo path failed inside an experiment.
class ExperimentFailure : public Error {
 public:
  ExperimentFailure(const std::string& what, std::uint64_t path)
      : Error("path " + std::to_string(path) + ": " + what), path_(path) {}
  std::uint64_t path() const noexcept { return path_; }

 private:
  std::uint64_t path_;
};

}  // namespace snls
