#pragma once

#include <array>
#include <cstdint>

namespace gtvc {

/// Philox4x32-10 counter-based generator.
///
/// A generator is identified by (seed, stream). Distinct streams of the same
/// seed are statistically independent, so per-index streams give sampling
/// results that do not depend on evaluation order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
};

/// Derives a child seed from a parent seed and a tag; used to give the
/// training sample, the test sample and the quadrature jitter separate seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace gtvc
