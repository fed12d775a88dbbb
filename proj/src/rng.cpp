#include "eigadm/rng.h"

#include <cmath>

namespace eigadm {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kDeriveSalt = 0x8CB92BA72F3D8DD7ULL;

std::uint64_t make_key(std::uint64_t seed, std::uint64_t stream_id) noexcept {
  // For a fixed seed, stream_id -> key is a bijection.
  return mix64(mix64(seed + kStreamSalt) ^ stream_id);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(make_key(seed, stream_id)) {}

std::uint64_t RngStream::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

RngStream RngStream::derive(std::uint64_t index) const noexcept {
  // (index + 1) * kGolden is a bijection mod 2^64 (odd multiplier), so
  // distinct indices always land on distinct child ids.
  return RngStream(seed_, mix64(mix64(stream_id_ + kDeriveSalt) + (index + 1) * kGolden));
}

RngStream derive_stream(const RngStream& root, std::uint64_t index) noexcept {
  return root.derive(index);
}

}  // namespace eigadm
