#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace kw {

// splitmix64: small, fully specified, byte-stable across platforms. All
// randomized sweeps in the library and CLI draw from this so that identical
// seeds give identical reports.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  // uniform point on the unit circle
  std::complex<double> unit() {
    double a = 2.0 * M_PI * uniform();
    return {std::cos(a), std::sin(a)};
  }

  std::vector<std::complex<double>> unit_vector(int n) {
    std::vector<std::complex<double>> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) v.push_back(unit());
    return v;
  }

 private:
  uint64_t state_;
};

}  // namespace kw
