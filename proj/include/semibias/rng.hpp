#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace semibias {

// Deterministic, splittable random stream. A stream is identified by a key
// (master seed plus a path of substream ids); the mapping key -> sequence is
// fixed by this implementation, independent of platform, thread schedule, or
// standard library. Internally: splitmix64 key expansion feeding a
// xoshiro256++ state.
//
// Conventions used throughout the project:
//   replication r            -> RngStream(master, {r})
//   bootstrap p inside r     -> RngStream(master, {r, p})
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : RngStream(seed, {}) {}
  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  // Child stream: same derivation rule as appending ids to the constructor
  // path.
  RngStream derive(std::uint64_t id) const;

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1); never returns an endpoint, so it is
  // safe to feed into normal_quantile.
  double next_uniform();

  // Standard normal via inverse CDF (one uniform per draw, reproducible).
  double next_normal();

  // Uniform index in [0, n). n must be positive.
  std::size_t next_below(std::size_t n);

private:
  RngStream() = default;
  std::uint64_t key_[2];    // derivation key (kept for derive())
  std::uint64_t state_[4];  // xoshiro256++ state
};

}  // namespace semibias
