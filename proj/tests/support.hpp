#pragma once

// Test-side helpers: seeded generators and a second, deliberately naive
// evaluation of tau_m at the special points that shares no code with the
// library (long double, no argument reduction, no S-matrix).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "verlinde/fusion_ring.hpp"
#include "verlinde/prequant.hpp"

namespace testing {

using verlinde::FusionElement;
using verlinde::Integer;
using verlinde::Level;

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eed'2024ULL ^ salt); }

// Weyl character: sin((m+1)x)/sin(x) at x = pi(l+1)/(k+2).
inline long double naive_tau(int k, int m, int l) {
  const long double x = std::numbers::pi_v<long double> * (l + 1) / (k + 2);
  return std::sin((m + 1) * x) / std::sin(x);
}

inline long double naive_eval(const FusionElement& a, int l) {
  long double v = 0;
  const int k = a.level().k();
  for (int m = 0; m <= k; ++m) v += a[static_cast<std::size_t>(m)].convert_to<long double>() * naive_tau(k, m, l);
  return v;
}

inline FusionElement random_element(Level level, std::mt19937_64& g, int bound = 5, double density = 0.6) {
  std::uniform_int_distribution<int> coeff(-bound, bound);
  std::bernoulli_distribution keep(density);
  std::vector<Integer> c(static_cast<std::size_t>(level.rank()));
  for (auto& x : c)
    if (keep(g)) x = coeff(g);
  return FusionElement(level, std::move(c));
}

// Random admissible surface: even level divisible by 4 when stars are
// present in numbers >= 3, labels mixed between the star and arbitrary
// classes, |Gamma| kept small enough for brute force.
inline verlinde::SurfaceData random_surface(std::mt19937_64& g, int max_level = 16, int max_r = 5, int max_h = 2,
                                            int max_other = 3) {
  for (;;) {
    const int k = std::uniform_int_distribution<int>(0, max_level)(g);
    const int r = (k % 2 == 0) ? std::uniform_int_distribution<int>(0, max_r)(g) : 0;
    const int h = std::uniform_int_distribution<int>(0, max_h)(g);
    const int others = std::uniform_int_distribution<int>(0, max_other)(g);
    verlinde::SurfaceData s{Level(k), h, {}};
    for (int i = 0; i < r; ++i) s.labels.push_back(k / 2);
    for (int i = 0; i < others; ++i) {
      int m = std::uniform_int_distribution<int>(0, k)(g);
      if (2 * m == k) m = 0;
      s.labels.push_back(m);
    }
    std::shuffle(s.labels.begin(), s.labels.end(), g);
    if (verlinde::check_prequantization(s).admissible()) return s;
  }
}

inline verlinde::PrequantChoice random_bits(std::size_t n, std::mt19937_64& g) {
  std::bernoulli_distribution coin(0.5);
  verlinde::PrequantChoice c;
  for (std::size_t i = 0; i < n; ++i) c.psi_bits.push_back(coin(g) ? 1 : 0);
  return c;
}

}  // namespace testing
