#include "tinsim/philox.hpp"

#include <cmath>

#include "tinsim/constants.hpp"

namespace tinsim {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

double uint32_to_open_unit(std::uint32_t u) {
  return (static_cast<double>(u) + 1.0) * 0x1.0p-32;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint32_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

std::array<double, 4> NormalStream::block(std::uint64_t index) const {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32), stream_, 0u};
  const auto w = Philox4x32::generate(ctr, key_);
  std::array<double, 4> out{};
  for (int k = 0; k < 2; ++k) {
    const double u1 = uint32_to_open_unit(w[2 * k]);
    const double u2 = uint32_to_open_unit(w[2 * k + 1]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    out[2 * k] = r * std::cos(constants::two_pi * u2);
    out[2 * k + 1] = r * std::sin(constants::two_pi * u2);
  }
  return out;
}

double NormalStream::next() {
  if (used_ == 4) {
    buffer_ = block(block_index_++);
    used_ = 0;
  }
  return buffer_[used_++];
}

}  // namespace tinsim
