#include "snls/rng.hpp"

namespace snls {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

}  // namespace

Philox4x32::Philox4x32(std::uint64_t key, std::uint32_t word1, std::uint32_t word2,
                       std::uint32_t word3)
    : key_{static_cast<std::uint32_t>(key & 0xffffffffu), static_cast<std::uint32_t>(key >> 32)},
      counter_{0, word1, word2, word3} {}

Philox4x32::Block Philox4x32::generate(Block c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (used_ == 4) {
    block_ = generate(counter_, key_);
    ++counter_[0];
    used_ = 0;
  }
  return block_[used_++];
}

}  // namespace snls
