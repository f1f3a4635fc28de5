#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lpptw {

// Stream tags keep the random numbers of different pipeline stages disjoint:
// the stream id of sample `i` in stage `tag` is (tag << 48) | i.
enum class StreamTag : std::uint64_t {
  kGeneric = 0,
  kWeights = 1,
  kGue = 2,
  kBrownian = 3,
  kSkorohod = 4,
  kShape = 5,
  kDirectWalk = 6,
};

std::uint64_t stream_id_for(StreamTag tag, std::uint64_t index);

// Philox4x32-10 block function: one 128-bit output per (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// The output is a pure function of (seed, stream_id, position): the seed is
/// the Philox key, the stream id occupies the upper half of the counter and
/// the block index the lower half. Two streams constructed with the same
/// (seed, stream_id) produce identical sequences regardless of which thread
/// consumes them.
///
/// Satisfies UniformRandomBitGenerator, but the distribution helpers below
/// should be preferred over <random> distributions: the latter are
/// implementation-defined and would break cross-toolchain reproducibility.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static RngStream for_sample(std::uint64_t seed, StreamTag tag,
                              std::uint64_t index) {
    return RngStream(seed, stream_id_for(tag, index));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  // Standard normal, Box-Muller; pairs are cached so every draw costs half
  // a transform.
  double normal();
  // Standard exponential (rate 1).
  double exponential();
  // Gamma(shape, scale 1), Marsaglia-Tsang.
  double gamma(double shape);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  // Number of Philox blocks consumed so far.
  std::uint64_t counter() const { return block_counter_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int block_pos_ = 2;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace lpptw
