#include <doctest.h>

#include <functional>
#include <random>

#include "mfe/cumulants.hpp"
#include "oracles.hpp"

using namespace mfe;

namespace {

MomentFunction mf(const Rational& rate, std::vector<Rational> coeffs) { return MomentFunction(rate, std::move(coeffs)); }

// Blocks of pi read as increasing cycles.
oracle::Perm block_permutation(const NonCrossingPartition& pi) {
  oracle::Perm s(pi.size());
  for (const auto& block : pi.blocks())
    for (std::size_t m = 0; m < block.size(); ++m) s[block[m]] = block[(m + 1) % block.size()];
  return s;
}

// (1/n^k) Σ over transposition tuples raising the cycle count by one at
// every step of δ(i . τ_1 ... τ_k, j), by direct enumeration.
Rational taylor_oracle(const NonCrossingPartition& pi, int order, const Colourization& col, int n) {
  const int p = col.size();
  const auto ts = oracle::transpositions(p);
  Rational total = 0;
  std::function<void(const oracle::Perm&, const std::vector<int>&, int)> rec = [&](const oracle::Perm& s,
                                                                                   const std::vector<int>& colours,
                                                                                   int left) {
    if (left == 0) {
      if (colours == col.j) total += 1;
      return;
    }
    for (const auto& t : ts) {
      const auto next = oracle::compose(t, s);
      if (oracle::cycles(next) != oracle::cycles(s) + 1) continue;
      std::vector<int> moved(p);
      for (int m = 0; m < p; ++m) moved[m] = colours[t[m]];
      rec(next, moved, left - 1);
    }
  };
  rec(block_permutation(pi), col.i, order);
  return total / pow(Rational(n), order);
}

Colourization random_colourization(int p, int n, std::mt19937_64& rng) {
  Colourization c;
  for (int m = 0; m < p; ++m) {
    c.i.push_back(static_cast<int>(rng() % n));
    c.j.push_back(static_cast<int>(rng() % n));
  }
  return c;
}

}  // namespace

TEST_CASE("colourizations") {
  Colourization c{{0, 1}, {1}};
  CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
  c.j = {1, 2};
  CHECK_THROWS_AS(c.validate(2), std::invalid_argument);
  c.j = {1, 0};
  CHECK_NOTHROW(c.validate(2));
  CHECK(c.word() == parse_oword("u12 u21"));
  CHECK(act({5, 6, 7}, Permutation::full_cycle(3)) == std::vector<int>{6, 7, 5});
}

TEST_CASE("cycle-splitting transpositions") {
  CHECK(splitting_transpositions(Permutation::identity(4)).empty());
  CHECK(splitting_transpositions(Permutation::full_cycle(4)).size() == 6);
  CHECK(splitting_transpositions(Permutation::from_cycles(4, {{0, 1}, {2, 3}})).size() == 2);
}

TEST_CASE("Taylor coefficient examples") {
  const auto one3 = NonCrossingPartition(SetPartition::one_block(3));
  const Colourization same{{0, 0, 0}, {0, 0, 0}};
  CHECK(taylor_coeff(one3, 0, same, 1) == 1);
  CHECK(taylor_coeff(one3, 2, same, 1) == 3);
  const NonCrossingPartition split(3, {{0, 1}, {2}});
  CHECK(taylor_coeff(split, 2, same, 1) == 0);
  CHECK_THROWS(taylor_coeff(one3, 3, same, 1));
  CHECK_THROWS(taylor_coeff(one3, -1, same, 1));
}

TEST_CASE("Taylor coefficients agree with tuple enumeration") {
  std::mt19937_64 rng(70);
  for (int p = 1; p <= 5; ++p)
    for (const auto& pi : enumerate_nc(p))
      for (int trial = 0; trial < 3; ++trial) {
        const int n = 1 + trial;
        auto col = random_colourization(p, n, rng);
        if (trial == 0) col.j = act(col.i, Permutation::full_cycle(p));
        for (int order = 0; order < p; ++order) CHECK(taylor_coeff(pi, order, col, n) == taylor_oracle(pi, order, col, n));
      }
}

TEST_CASE("Taylor coefficients are invariant under relabelling colours") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 80; ++trial) {
    const int p = 1 + trial % 5, n = 3;
    const auto pis = enumerate_nc(p);
    const auto& pi = pis[rng() % pis.size()];
    auto col = random_colourization(p, n, rng);
    if (trial % 2) col.j = act(col.i, Permutation::full_cycle(p));
    std::vector<int> relabel{0, 1, 2};
    std::shuffle(relabel.begin(), relabel.end(), rng);
    Colourization moved = col;
    for (auto& x : moved.i) x = relabel[x];
    for (auto& x : moved.j) x = relabel[x];
    for (int order = 0; order < p; ++order) CHECK(taylor_coeff(pi, order, moved, n) == taylor_coeff(pi, order, col, n));
  }
}

TEST_CASE("closed-form cumulants") {
  CHECK(kappa_closed_form(1, 1, {{0}, {0}}) == mf(Rational(-1, 2), {1}));
  CHECK(kappa_closed_form(2, 2, {{0, 1}, {1, 0}}) == mf(Rational(-1), {0, Rational(-1, 2)}));
  CHECK(kappa_closed_form(2, 2, {{0, 1}, {0, 1}}).is_zero());
  CHECK(kappa_closed_form(3, 1, {{0, 0, 0}, {0, 0, 0}}) == mf(Rational(-3, 2), {0, 0, Rational(3, 2)}));
  CHECK_THROWS(kappa_closed_form(0, 1, {}));
  CHECK(kappa_closed_form(1, 2, {{0}, {0}})(0.8) == doctest::Approx(std::exp(-0.4)));
}

TEST_CASE("moment-cumulant inversion") {
  const std::vector<Rational> dirac(5, Rational(1));
  CHECK(cumulants_from_moments(dirac, 5) == std::vector<Rational>{1, 0, 0, 0, 0});
  const std::vector<Rational> catalan{0, 1, 0, 2, 0, 5};
  CHECK(cumulants_from_moments(catalan, 6) == std::vector<Rational>{0, 1, 0, 0, 0, 0});
  CHECK_THROWS_AS(cumulants_from_moments(catalan, 7), std::invalid_argument);
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Rational> m;
    for (int q = 0; q < 6; ++q) m.push_back(ratio(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 7)));
    CHECK(moments_from_cumulants(cumulants_from_moments(m, 6), 6) == m);
    CHECK(cumulants_from_moments(moments_from_cumulants(m, 6), 6) == m);
  }
  std::vector<MomentFunction> moments;
  for (int p = 1; p <= 5; ++p) moments.push_back(biane_moment(p));
  const auto kappas = cumulants_from_moments(moments, 5);
  for (int p = 1; p <= 5; ++p)
    CHECK(kappas[p - 1] == kappa_closed_form(p, 1, {std::vector<int>(p, 0), std::vector<int>(p, 0)}));
}

TEST_CASE("cumulants of generators match the closed form") {
  std::mt19937_64 rng(73);
  for (int n = 1; n <= 3; ++n)
    for (int trial = 0; trial < 8; ++trial) {
      const int p = 1 + trial % 4;
      auto col = random_colourization(p, n, rng);
      if (trial % 2 == 0) col.j = act(col.i, Permutation::full_cycle(p));
      CHECK(cumulant_of_generators(col, n) == kappa_closed_form(p, n, col));
    }
}

TEST_CASE("moments of the free unitary Brownian motion by path counting") {
  CHECK(biane_moment(1) == mf(Rational(-1, 2), {1}));
  CHECK(biane_moment(2) == mf(Rational(-1), {1, -1}));
  CHECK(biane_moment(3) == mf(Rational(-3, 2), {1, -3, Rational(3, 2)}));
  CHECK_THROWS(biane_moment(kBianeBound + 1));
  for (int p = 1; p <= kBianeBound; ++p) {
    const auto coeffs = biane_moment(p).coeffs();
    REQUIRE(static_cast<int>(coeffs.size()) == p);
    const Rational top = coeffs.back() * Rational(factorial(p - 1)) * (p % 2 ? 1 : -1);
    CHECK(top == pow(Rational(p), p - 2));
    const oracle::Perm cycle = block_permutation(NonCrossingPartition(SetPartition::one_block(p)));
    CHECK(top == Rational(oracle::count_factorizations(cycle, p - 1)));
  }
}
