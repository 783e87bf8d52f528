#pragma once

#include <cstdint>

// Counter-based RNG (Philox4x32-10).  A generator is addressed by (seed, stream);
// draws are a pure function of that pair, which is what makes Monte Carlo runs
// reproducible across thread counts: replication r always uses stream r.

namespace powertail {

class Philox {
 public:
  explicit Philox(uint64_t seed, uint64_t stream = 0)
      : key0_(static_cast<uint32_t>(seed)),
        key1_(static_cast<uint32_t>(seed >> 32)),
        ctr2_(static_cast<uint32_t>(stream)),
        ctr3_(static_cast<uint32_t>(stream >> 32)) {}

  uint64_t next_u64() {
    if (idx_ >= 4) refill();
    const uint64_t lo = out_[idx_], hi = out_[idx_ + 1];
    idx_ += 2;
    return lo | (hi << 32);
  }

  // Uniform on the open interval (0,1); safe to feed through inverse cdfs.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal();

  // Raw keyed block, exposed for the known-answer tests.
  static void block(const uint32_t ctr[4], const uint32_t key[2], uint32_t out[4]);

 private:
  void refill();

  uint32_t key0_, key1_;
  uint32_t ctr0_ = 0, ctr1_ = 0;  // 64-bit block position
  uint32_t ctr2_, ctr3_;          // stream id
  uint64_t out_[4] = {};
  int idx_ = 4;
};

}  // namespace powertail
