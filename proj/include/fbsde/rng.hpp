#ifndef FBSDE_RNG_HPP
#define FBSDE_RNG_HPP

// Counter-based random numbers (Philox 4x32-10, Salmon et al., SC 2011).
//
// Every variate is a pure function of (seed, domain, stream, step, slot), so
// any subset of Monte Carlo paths can be regenerated in isolation and results
// do not depend on how work is split across threads.

#include <array>
#include <cmath>
#include <cstdint>

namespace fbsde {

namespace detail {

inline void philox_mulhilo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  lo = static_cast<uint32_t>(p);
  hi = static_cast<uint32_t>(p >> 32);
}

}  // namespace detail

struct PhiloxBlock {
  std::array<uint32_t, 4> word;
};

inline PhiloxBlock philox4x32(std::array<uint32_t, 4> ctr,
                              std::array<uint32_t, 2> key) {
  constexpr uint32_t kW32A = 0x9E3779B9u, kW32B = 0xBB67AE85u;
  constexpr uint32_t kM4x32A = 0xD2511F53u, kM4x32B = 0xCD9E8D57u;
  for (int round = 0;; ++round) {
    uint32_t lo0, hi0, lo1, hi1;
    detail::philox_mulhilo(kM4x32A, ctr[0], lo0, hi0);
    detail::philox_mulhilo(kM4x32B, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    if (round == 9) break;
    key[0] += kW32A;
    key[1] += kW32B;
  }
  return PhiloxBlock{ctr};
}

// Independent key spaces; keeps e.g. McKean-Vlasov initial draws disjoint
// from all Brownian streams under one master seed.
enum class RngDomain : uint32_t {
  kBrownian = 0,
  kInitialLaw = 1,
  kAux = 2,
};

// 64-bit seed mixer for deriving sub-seeds (inner ensembles, nested runs).
inline uint64_t mix_seed(uint64_t seed, uint64_t salt = 0) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace detail {

// 53-bit uniform strictly inside (0,1); safe under log().
inline double unit_open(uint32_t a, uint32_t b) {
  const uint64_t bits = (static_cast<uint64_t>(a) << 32) | b;
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

// Two standard normals for (seed, domain, stream, step, pair) via Box-Muller.
inline std::array<double, 2> normal_pair(uint64_t seed, RngDomain domain,
                                         uint64_t stream, uint32_t step,
                                         uint32_t pair) {
  const std::array<uint32_t, 4> ctr = {
      step, pair, static_cast<uint32_t>(stream),
      static_cast<uint32_t>(stream >> 32) ^
          (static_cast<uint32_t>(domain) << 28)};
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed),
                                       static_cast<uint32_t>(seed >> 32)};
  const PhiloxBlock blk = philox4x32(ctr, key);
  const double u1 = detail::unit_open(blk.word[0], blk.word[1]);
  const double u2 = detail::unit_open(blk.word[2], blk.word[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.283185307179586476925286766559 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Standard normal for slot `component` of a step; components 2j, 2j+1 share
// one counter block.
inline double standard_normal(uint64_t seed, RngDomain domain, uint64_t stream,
                              uint32_t step, uint32_t component) {
  const auto z = normal_pair(seed, domain, stream, step, component / 2);
  return z[component % 2];
}

// Uniform in (0,1) drawn from the auxiliary domain.
inline double uniform_open(uint64_t seed, uint64_t stream, uint32_t step,
                           uint32_t slot) {
  const std::array<uint32_t, 4> ctr = {
      step, slot, static_cast<uint32_t>(stream),
      static_cast<uint32_t>(stream >> 32) ^
          (static_cast<uint32_t>(RngDomain::kAux) << 28)};
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed),
                                       static_cast<uint32_t>(seed >> 32)};
  const PhiloxBlock blk = philox4x32(ctr, key);
  return detail::unit_open(blk.word[0], blk.word[1]);
}

}  // namespace fbsde

#endif  // FBSDE_RNG_HPP
