#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace snls {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by a 64-bit key and the upper three counter words;
/// the lowest counter word enumerates 128-bit blocks within the stream. Any
/// (key, stream) pair can be regenerated independently of every other one.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;

  Philox4x32(std::uint64_t key, std::uint32_t word1, std::uint32_t word2, std::uint32_t word3);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Raw block function: ten Philox rounds of `counter` under `key`.
  static Block generate(Block counter, std::array<std::uint32_t, 2> key);

 private:
  std::array<std::uint32_t, 2> key_;
  Block counter_;
  Block block_{};
  int used_ = 4;
};

/// Substream for (master seed, Monte Carlo path, time step). Identical triples
/// give identical draws regardless of thread, parameter set, or call order.
inline Philox4x32 substream(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
  return Philox4x32(seed, static_cast<std::uint32_t>(step),
                    static_cast<std::uint32_t>(path & 0xffffffffu),
                    static_cast<std::uint32_t>(path >> 32));
}

}  // namespace snls
