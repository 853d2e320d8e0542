#pragma once

#include <array>
#include <cstdint>

namespace tinsim {

/// Counter-based Philox4x32-10. Stateless: each (key, counter) maps to four
/// independent 32-bit words, so streams can be split without coordination.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Gaussian stream keyed by a 64-bit seed. Sample i of stream s is derived from
/// counter (i_lo, i_hi, s, 0) only, so results do not depend on call order.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint32_t stream);

  /// Four standard normals for block index `block` (Box-Muller on two pairs).
  std::array<double, 4> block(std::uint64_t index) const;

  /// Sequential draw; consumes the blocks in order.
  double next();

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<double, 4> buffer_{};
  int used_ = 4;
};

/// Maps a 32-bit word to (0, 1].
double uint32_to_open_unit(std::uint32_t u);

}  // namespace tinsim
