#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace extremesim {

/// Philox4x32 with 10 rounds (Salmon et al., counter-based).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// The 64-bit seed is the Philox key. The 128-bit counter is split into a
/// 64-bit draw index and the (replica, lane) pair, so streams that differ in
/// replica or lane never share a counter value. Satisfies
/// UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint32_t replica = 0, std::uint32_t lane = 0);

  /// Stream with the same seed and replica on another lane.
  RngStream fork(std::uint32_t lane) const { return RngStream(seed_, replica_, lane); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on (0, 1], 53-bit resolution.
  double uniform();
  /// Exp(rate) variate; +infinity when rate == 0 (one draw is still consumed).
  double exponential(double rate);
  /// Standard normal variate (ziggurat).
  double normal();

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t replica() const noexcept { return replica_; }
  std::uint32_t lane() const noexcept { return lane_; }
  /// Number of 64-bit words drawn so far.
  std::uint64_t draws() const noexcept { return 2 * block_ - (have_spare_ ? 1 : 0); }

 private:
  std::uint64_t seed_;
  std::uint32_t replica_;
  std::uint32_t lane_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace extremesim
