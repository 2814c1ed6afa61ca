#pragma once

// Counter-based random streams and the three samplers used by the curve
// dynamics: Uniform(0,1), standard Exponential and Rayleigh.

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>

#include "pcity/errors.hpp"

namespace pcity {

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

}  // namespace detail

// Anything that can hand out the two primitive variates the samplers need.
template <class S>
concept VariateSource = requires(S& s) {
  { s.uniform01() } -> std::convertible_to<double>;
  { s.exponential1() } -> std::convertible_to<double>;
};

/// Inverse CDF of the standard Exponential law.
inline double exponential_inverse_cdf(double u) { return -std::log1p(-u); }

/// Deterministic stream keyed by (seed, stream_id, tag).
///
/// Output block k is Philox4x32-10 applied to the counter (k, stream_id) under
/// a key derived from (seed, tag), so streams are reproducible, random access
/// in k, and streams with different ids or tags never share a block. A stream
/// is a plain value: copying it forks an identical sequence, and it must not
/// be shared across threads.
///
/// Also satisfies UniformRandomBitGenerator so std distributions can use it.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t tag = 0)
      : seed_(seed), stream_id_(stream_id), tag_(tag) {
    const std::uint64_t k = detail::splitmix64(seed ^ detail::splitmix64(tag + 0x632BE59BD9B4E019ULL));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  }

  /// Independent child stream. Fork tags are combined, so
  /// `s.fork(a).fork(b)` and `s.fork(b).fork(a)` differ.
  [[nodiscard]] RngStream fork(std::uint64_t tag) const {
    return RngStream(seed_, stream_id_, detail::splitmix64(tag_ * 0x9E3779B97F4A7C15ULL + tag + 1));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (buffered_ == 0) {
      const std::array<std::uint32_t, 4> ctr = {
          static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
          static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
      const auto out = detail::philox4x32(ctr, key_);
      buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
      buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
      buffered_ = 2;
      ++block_;
    }
    return buffer_[2 - buffered_--];
  }

  /// Uniform on the open interval (0,1): 53-bit grid shifted by half a step.
  double uniform01() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential1() { return exponential_inverse_cdf(uniform01()); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t tag() const { return tag_; }
  // Number of 64-bit words consumed so far.
  std::uint64_t position() const { return 2 * block_ - buffered_; }

  friend bool operator==(const RngStream& a, const RngStream& b) {
    return a.seed_ == b.seed_ && a.stream_id_ == b.stream_id_ && a.tag_ == b.tag_ &&
           a.position() == b.position();
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t tag_;
  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

static_assert(VariateSource<RngStream>);

template <VariateSource S>
double uniform01(S& stream) {
  return stream.uniform01();
}

template <VariateSource S>
double exponential1(S& stream) {
  return stream.exponential1();
}

/// Rayleigh(sqrt(2s)) draw, i.e. survival exp(-g^2 / 4s), as 2 sqrt(s E).
inline double rayleigh_from_exponential(double s, double e) { return 2.0 * std::sqrt(s * e); }

template <VariateSource S>
double rayleigh(S& stream, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InvalidParameter("rayleigh: scale parameter s must be positive and finite");
  }
  return rayleigh_from_exponential(s, stream.exponential1());
}

}  // namespace pcity
