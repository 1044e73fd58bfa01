#include "semibias/rng.hpp"

#include <stdexcept>

#include "semibias/normal.hpp"

namespace semibias {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  key_[0] = seed;
  key_[1] = 0x6a09e667f3bcc909ull;  // path accumulator, started from a fixed tag
  for (std::uint64_t id : path) {
    std::uint64_t mix = key_[1] ^ (id + 0x9e3779b97f4a7c15ull);
    key_[1] = mix * 0xff51afd7ed558ccdull + key_[0];
    key_[1] ^= key_[1] >> 33;
  }
  std::uint64_t s = key_[0] ^ rotl(key_[1], 17);
  for (auto& word : state_) word = splitmix64(s);
}

RngStream RngStream::derive(std::uint64_t id) const {
  RngStream child;
  child.key_[0] = key_[0];
  child.key_[1] = key_[1];
  std::uint64_t mix = child.key_[1] ^ (id + 0x9e3779b97f4a7c15ull);
  child.key_[1] = mix * 0xff51afd7ed558ccdull + child.key_[0];
  child.key_[1] ^= child.key_[1] >> 33;
  std::uint64_t s = child.key_[0] ^ rotl(child.key_[1], 17);
  for (auto& word : child.state_) word = splitmix64(s);
  return child;
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_uniform() {
  // 53-bit mantissa shifted to the midpoint of each cell: values lie in
  // ((0,1)) strictly.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() { return normal_quantile(next_uniform()); }

std::size_t RngStream::next_below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  // Fixed-point multiply; bias is O(n / 2^64), irrelevant at sample sizes here.
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

}  // namespace semibias
