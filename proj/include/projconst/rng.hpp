#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace projconst::rng {

// splitmix64 finalizer. Counter-based: the k-th draw of a stream is a pure
// function of (seed, stream, k), so results do not depend on evaluation order.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t k) {
  return mix(mix(seed ^ 0x5851f42d4c957f2dULL) + mix(stream) + k);
}

inline double to_unit(std::uint64_t u) {
  return static_cast<double>(u >> 11) * 0x1p-53;
}

struct Stream {
  std::uint64_t seed;
  std::uint64_t stream;
  std::uint64_t ctr = 0;

  Stream(std::uint64_t s, std::uint64_t st = 0) : seed(s), stream(st) {}

  std::uint64_t next_u64() { return keyed(seed, stream, ctr++); }
  double uniform01() { return to_unit(next_u64()); }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller, one value per call, pair cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::vector<double> normal_vec(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
  }

 private:
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Gaussian pair keyed directly by sample index; used by the Monte Carlo
// estimators so that sample j is reproducible in isolation.
inline void keyed_normal_pair(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t k, double& g0, double& g1) {
  double u1 = to_unit(keyed(seed, stream, 2 * k));
  double u2 = to_unit(keyed(seed, stream, 2 * k + 1));
  if (u1 <= 0.0) u1 = 0x1p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  g0 = r * std::cos(a);
  g1 = r * std::sin(a);
}

}  // namespace projconst::rng
