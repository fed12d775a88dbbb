#pragma once

#include <cstdint>
#include <limits>

namespace eigadm {

/// Counter-based random stream keyed by (seed, stream_id).
///
/// The k-th 64-bit output is a bijective mix of `key + (k + 1) * golden`,
/// where the key is derived from the seed and stream id. Nothing depends
/// on platform distribution implementations, so sequences are identical
/// on every machine. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;
  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() noexcept;

  /// Standard normal (Marsaglia polar method, spare value cached).
  double normal() noexcept;

  /// Child stream; depends only on (seed, stream_id, index), never on how
  /// many draws this stream has produced.
  RngStream derive(std::uint64_t index) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

RngStream derive_stream(const RngStream& root, std::uint64_t index) noexcept;

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace eigadm
