#include <doctest.h>

#include <map>
#include <set>

#include "support.hpp"
#include "verlinde/prequant.hpp"

using namespace verlinde;

namespace {

SurfaceData surf(int k, int h, std::vector<int> labels) { return SurfaceData{Level(k), h, std::move(labels)}; }

GammaElement gamma(std::vector<std::uint8_t> bits) { return GammaElement{std::move(bits)}; }

// Gamma straight from its definition: central sign vectors (one per slot)
// that are trivial on non-star boundary slots and have an even number of c
// entries among the boundary slots.
std::set<std::vector<std::uint8_t>> brute_gamma(const SurfaceData& s) {
  std::set<std::vector<std::uint8_t>> out;
  const auto n = static_cast<std::size_t>(s.slot_count());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::uint8_t> bits(n);
    int parity = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      bits[i] = (mask >> i) & 1U;
      if (static_cast<int>(i) < s.boundary_count() && bits[i]) {
        parity ^= 1;
        if (!s.is_star(s.labels[i])) ok = false;
      }
    }
    if (ok && parity == 0) out.insert(bits);
  }
  return out;
}

int brute_psi(const std::vector<std::uint8_t>& psi, const std::vector<std::uint8_t>& g) {
  int e = 0;
  for (std::size_t i = 0; i < g.size(); ++i) e ^= psi[i] & g[i];
  return e ? -1 : 1;
}

}  // namespace

TEST_CASE("check_prequantization: golden cases") {
  CHECK(check_prequantization(surf(4, 0, {2, 2, 2})).admissible());
  CHECK(check_prequantization(surf(5, 0, {2})).admissible());

  const auto r3 = check_prequantization(surf(6, 0, {3, 3, 3}));
  CHECK_FALSE(r3.admissible());
  CHECK(r3.failure_reason() == "condition (iii) requires k ∈ 4N");

  const auto g1 = check_prequantization(surf(3, 1, {}));
  CHECK_FALSE(g1.admissible());
  CHECK(g1.failure_reason().find("condition (ii)") == 0);

  const auto range = check_prequantization(surf(3, 0, {4}));
  CHECK_FALSE(range.admissible());
  CHECK(range.failure_reason().find("condition (i)") == 0);
}

TEST_CASE("check_prequantization: odd levels never see stars, r <= 2 needs only even k") {
  CHECK(check_prequantization(surf(6, 0, {3, 3})).admissible());
  CHECK(check_prequantization(surf(6, 2, {3, 1})).admissible());
  CHECK(check_prequantization(surf(7, 0, {3, 4, 7})).admissible());
  CHECK_FALSE(check_prequantization(surf(7, 2, {})).admissible());
  CHECK(check_prequantization(surf(0, 3, {0, 0})).admissible());
}

TEST_CASE("require_admissible throws with the reason") {
  try {
    require_admissible(surf(6, 0, {3, 3, 3}));
    FAIL("expected NotAdmissible");
  } catch (const NotAdmissible& e) {
    CHECK(std::string(e.what()) == "inadmissible: condition (iii) requires k ∈ 4N");
  }
}

TEST_CASE("enumerate_gamma: golden sizes") {
  const auto two_stars = enumerate_gamma(surf(4, 0, {2, 2}));
  REQUIRE(two_stars.size() == 2);
  CHECK(two_stars[0] == gamma({0, 0}));
  CHECK(two_stars[1] == gamma({1, 1}));
  CHECK(enumerate_gamma(surf(2, 1, {})).size() == 4);
  CHECK(enumerate_gamma(surf(4, 0, {2, 1})).size() == 1);
  CHECK(enumerate_gamma(surf(4, 0, {})).size() == 1);
  CHECK_THROWS_AS(enumerate_gamma(surf(4, 4, {2, 2, 2}), 64), GroupTooLarge);
}

TEST_CASE("enumerate_gamma equals the definition (random surfaces)") {
  auto g = testing::rng(10);
  for (int trial = 0; trial < 150; ++trial) {
    const auto s = testing::random_surface(g, 16, 5, 2, 3);
    const auto listed = enumerate_gamma(s);
    std::set<std::vector<std::uint8_t>> seen;
    for (const auto& x : listed) seen.insert(x.bits);
    CHECK(seen.size() == listed.size());
    CHECK(seen == brute_gamma(s));
    CHECK(listed.size() == gamma_order(s));
    CHECK(listed.front().is_identity());
    const int r = s.star_count();
    CHECK(gamma_order(s) == (std::size_t{1} << (2 * s.genus + (r > 0 ? r - 1 : 0))));
  }
}

TEST_CASE("enumerate_choices: golden counts") {
  CHECK(enumerate_choices(surf(4, 0, {2, 2, 2})).size() == 4);
  const auto pm = enumerate_choices(surf(6, 0, {3, 3}));
  REQUIRE(pm.size() == 2);
  CHECK(pm[0].is_trivial());
  CHECK(enumerate_choices(surf(5, 0, {1, 4})).size() == 1);
  CHECK_THROWS_AS(enumerate_choices(surf(6, 0, {3, 3, 3})), NotAdmissible);
}

TEST_CASE("choices: homomorphism, orthogonality and inequivalence against brute force") {
  auto g = testing::rng(11);
  for (int trial = 0; trial < 80; ++trial) {
    const auto s = testing::random_surface(g, 12, 4, 2, 2);
    const auto gammas = enumerate_gamma(s);
    const auto choices = enumerate_choices(s);
    REQUIRE(choices.size() == gammas.size());

    // Every bit vector defines a functional; the distinct restrictions to
    // Gamma are exactly Hom(Gamma, +-1).
    std::set<std::vector<int>> all_restrictions;
    const auto n = static_cast<std::size_t>(s.slot_count());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<std::uint8_t> psi(n);
      for (std::size_t i = 0; i < n; ++i) psi[i] = (mask >> i) & 1U;
      std::vector<int> sig;
      for (const auto& x : gammas) sig.push_back(brute_psi(psi, x.bits));
      all_restrictions.insert(sig);
    }

    std::set<std::vector<int>> listed;
    for (const auto& psi : choices) {
      CHECK(is_canonical(s, psi));
      std::vector<int> sig;
      long long sum = 0;
      for (const auto& x : gammas) {
        sig.push_back(psi(x));
        sum += psi(x);
      }
      CHECK(sum == (psi.is_trivial() ? static_cast<long long>(gammas.size()) : 0));
      for (const auto& a : gammas)
        for (const auto& b : gammas) CHECK(psi(a * b) == psi(a) * psi(b));
      listed.insert(sig);
      CHECK(phase_factor(s, psi, gammas.front()) == 1);
    }
    CHECK(listed.size() == choices.size());
    CHECK(listed == all_restrictions);
  }
}

TEST_CASE("canonicalize keeps the functional on Gamma") {
  auto g = testing::rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = testing::random_surface(g, 12, 5, 2, 3);
    const auto raw = testing::random_bits(static_cast<std::size_t>(s.slot_count()), g);
    const auto c = canonicalize(s, raw);
    CHECK(is_canonical(s, c));
    CHECK(canonicalize(s, c) == c);
    for (const auto& x : enumerate_gamma(s)) {
      CHECK(c(x) == raw(x));
      CHECK(phase_factor(s, c, x) == phase_factor(s, raw, x));
    }
  }
}

TEST_CASE("phase_factor: golden values") {
  const auto star3 = surf(4, 0, {2, 2, 2});
  const PrequantChoice trivial3{{0, 0, 0}};
  CHECK(phase_factor(star3, trivial3, gamma({0, 0, 0})) == 1);
  CHECK(phase_factor(star3, trivial3, gamma({1, 1, 0})) == -1);
  CHECK(phase_factor(star3, PrequantChoice{{1, 0, 0}}, gamma({1, 1, 0})) == 1);

  const auto torus = surf(2, 1, {});
  CHECK(phase_factor(torus, PrequantChoice{{0, 0}}, gamma({1, 0})) == -1);
  CHECK(phase_factor(torus, PrequantChoice{{0, 0}}, gamma({1, 1})) == -1);
  CHECK(phase_factor(surf(4, 1, {}), PrequantChoice{{0, 0}}, gamma({1, 0})) == 1);

  // Two stars: the weight on the torus component is psi(c,c) itself, so the
  // trivial choice is Q_+ at every even level.
  CHECK(phase_factor(surf(4, 0, {2, 2}), PrequantChoice{{0, 0}}, gamma({1, 1})) == 1);
  CHECK(phase_factor(surf(6, 0, {3, 3}), PrequantChoice{{1, 0}}, gamma({1, 1})) == -1);
}

TEST_CASE("phase_factor: phi'/psi is independent of psi and multiplicative where the sign allows") {
  auto g = testing::rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = testing::random_surface(g, 16, 5, 2, 2);
    const auto gammas = enumerate_gamma(s);
    const auto choices = enumerate_choices(s);
    std::map<std::vector<std::uint8_t>, int> w;
    for (const auto& x : gammas) w[x.bits] = phase_factor(s, choices.front(), x);
    for (const auto& psi : choices)
      for (const auto& x : gammas) CHECK(phase_factor(s, psi, x) == w[x.bits] * psi(x));

    const int k = s.level.k();
    for (const auto& a : gammas)
      for (const auto& b : gammas) {
        const bool star_only = a.boundary_weight(s.boundary_count()) == a.weight() &&
                               b.boundary_weight(s.boundary_count()) == b.weight();
        const bool double_only = a.boundary_weight(s.boundary_count()) == 0 && b.boundary_weight(s.boundary_count()) == 0;
        if ((star_only && k % 8 == 0) || (double_only && k % 4 == 0))
          CHECK(w[(a * b).bits] == w[a.bits] * w[b.bits]);
      }
  }
}

TEST_CASE("restrictions") {
  const auto s = surf(8, 2, {4, 1, 4, 4});
  const PrequantChoice c{{1, 0, 0, 1, 1, 0, 0, 1}};
  CHECK(star_restriction(s, c) == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(double_restriction(s, c, 0) == std::vector<std::uint8_t>{1, 0});
  CHECK(double_restriction(s, c, 1) == std::vector<std::uint8_t>{0, 1});
  CHECK_THROWS_AS(double_restriction(s, c, 2), IndexOutOfRange);
  CHECK(s.star_slots() == std::vector<int>{0, 2, 3});
}
