#include <doctest.h>

#include <random>

#include "mfe/opvalued.hpp"
#include "oracles.hpp"

using namespace mfe;

namespace {

BlockMatrix random_block(Field f, const std::vector<int>& dims, std::mt19937_64& rng) {
  int n = 0;
  for (int d : dims) n += d;
  std::uniform_int_distribution<int> small(-3, 3);
  Eigen::MatrixXd re(n, n), im(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      re(i, j) = small(rng);
      im(i, j) = small(rng);
    }
  if (f == Field::R) return BlockMatrix(re, dims);
  return BlockMatrix(Eigen::MatrixXcd(re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>()), dims);
}

double diff(const DiagonalElement& a, const DiagonalElement& b) { return (a - b).max_abs(); }

NonCrossingPartition nc(int k, std::vector<std::vector<int>> blocks) { return NonCrossingPartition(k, blocks); }

bool is_mixed(const std::vector<int>& letters) {
  for (int l : letters)
    if (l != letters.front()) return true;
  return false;
}

}  // namespace

TEST_CASE("diagonal elements") {
  const DiagonalElement a{{Complex(1, 2), Complex(3)}}, b{{Complex(2), Complex(0, 1)}};
  CHECK((a * b).values == std::vector<Complex>{Complex(2, 4), Complex(0, 3)});
  CHECK((a + b).values == std::vector<Complex>{Complex(3, 2), Complex(3, 1)});
  CHECK(a.star().values == std::vector<Complex>{Complex(1, -2), Complex(3)});
  CHECK((a * 2.0).values == std::vector<Complex>{Complex(2, 4), Complex(6)});
  CHECK(DiagonalElement::zero(3).max_abs() == 0);
}

TEST_CASE("conditional expectation") {
  const BlockMatrix id(identity_matrix(Field::C, 5), {2, 3});
  CHECK(diff(cond_expectation(id), DiagonalElement{{1, 1}}) == 0);
  std::mt19937_64 rng(80);
  const auto a = random_block(Field::C, {2, 3}, rng);
  CHECK(cond_expectation(compress(a, 0, 1)).max_abs() == 0);
  const auto e = cond_expectation(a);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      DiagonalElement want = DiagonalElement::zero(2);
      if (i == j) want.values[i] = e.values[i];
      CHECK(diff(cond_expectation(compress(a, i, j)), want) < 1e-14);
    }
  const DiagonalElement d{{Complex(2), Complex(-1)}};
  CHECK(diff(cond_expectation(left_multiply(d, a)), d * e) < 1e-14);
  CHECK(diff(cond_expectation(right_multiply(a, d)), e * d) < 1e-14);
  QuatMatrix q = QuatMatrix::identity(3);
  q.b(0, 0) = 5;
  CHECK(diff(cond_expectation(BlockMatrix(q, {1, 2})), DiagonalElement{{1, 1}}) == 0);
}

TEST_CASE("nested expectations") {
  std::mt19937_64 rng(81);
  const std::vector<int> dims{1, 2};
  std::vector<BlockMatrix> m;
  for (int i = 0; i < 3; ++i) m.push_back(random_block(Field::C, dims, rng));
  const auto full = nc(3, {{0, 1, 2}});
  CHECK(diff(e_pi(full, m), cond_expectation(multiply(multiply(m[0], m[1]), m[2]))) < 1e-12);
  const std::vector<BlockMatrix> two{m[0], m[1]};
  CHECK(diff(e_pi(nc(2, {{0}, {1}}), two), cond_expectation(m[0]) * cond_expectation(m[1])) < 1e-12);
  const auto inner = cond_expectation(m[1]);
  const auto want = cond_expectation(multiply(m[0], left_multiply(inner, m[2])));
  CHECK(diff(e_pi(nc(3, {{0, 2}, {1}}), m), want) < 1e-12);
  const auto want2 = cond_expectation(multiply(right_multiply(m[0], inner), m[2]));
  CHECK(diff(e_pi(nc(3, {{0, 2}, {1}}), m), want2) < 1e-12);
  CHECK_THROWS(e_pi(nc(2, {{0, 1}}), m));
}

TEST_CASE("amalgamated cumulants") {
  std::mt19937_64 rng(82);
  const std::vector<int> dims{1, 2};
  const auto a = random_block(Field::C, dims, rng), b = random_block(Field::C, dims, rng);
  CHECK(diff(amalgamated_cumulant(nc(1, {{0}}), {a}), cond_expectation(a)) == 0);
  const BlockMatrix scalar(scale(identity_matrix(Field::C, 3), 2.5), dims);
  CHECK(amalgamated_cumulant(nc(2, {{0, 1}}), {a, scalar}).max_abs() < 1e-12);
  CHECK(amalgamated_cumulant(nc(2, {{0, 1}}), {scalar, b}).max_abs() < 1e-12);
  CHECK(amalgamated_cumulant(nc(3, {{0, 1, 2}}), {a, scalar, b}).max_abs() < 1e-12);
}

TEST_CASE("Mobius roundtrip between nested expectations and cumulants") {
  std::mt19937_64 rng(83);
  for (int k = 1; k <= 4; ++k)
    for (Field f : {Field::R, Field::C}) {
      std::vector<BlockMatrix> m;
      for (int i = 0; i < k; ++i) m.push_back(random_block(f, {1, 2, 4}, rng));
      for (const auto& pi : enumerate_nc(k)) {
        DiagonalElement sum = DiagonalElement::zero(3);
        for (const auto& gamma : enumerate_nc(k))
          if (gamma.leq(pi)) sum = sum + amalgamated_cumulant(gamma, m);
        CHECK(diff(sum, e_pi(pi, m)) == 0);
      }
    }
}

TEST_CASE("nested expectations vanish on mismatched boundary colours") {
  std::mt19937_64 rng(84);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + trial % 4;
    std::vector<BlockMatrix> m;
    std::vector<int> row(k), col(k);
    for (int i = 0; i < k; ++i) {
      row[i] = static_cast<int>(rng() % 2);
      col[i] = static_cast<int>(rng() % 2);
      m.push_back(compress(random_block(Field::C, {2, 3}, rng), row[i], col[i]));
    }
    for (const auto& pi : enumerate_nc(k)) {
      bool mismatch = false;
      for (const auto& block : pi.blocks()) mismatch |= row[block.front()] != col[block.back()];
      if (mismatch) CHECK(e_pi(pi, m).max_abs() == 0);
    }
  }
}

TEST_CASE("creating paths") {
  const auto one = DimensionFunction::uniform(1, Rational(1));
  const auto [b, w] = encode_word(parse_oword("u11 u11"));
  const auto zero = enumerate_paths(b, w, 0, one);
  REQUIRE(zero.size() == 1);
  CHECK(zero.front().steps.empty());
  CHECK(zero.front().endpoint == b);
  const auto paths = enumerate_paths(b, w, 1, one);
  REQUIRE(paths.size() == 1);
  CHECK(paths.front().types == std::vector<ElementaryType>{ElementaryType::Tau});
  CHECK(paths.front().coefficient(one) == -1);
  CHECK(enumerate_paths(b, w, 2, one).empty());
  CHECK_THROWS(enumerate_paths(b, w, -1, one));
  const auto s = cumulant_seed({0, 0}, {0, 0}, {false, false}, {0, 1});
  CHECK(enumerate_paths(s.diagram, s.word, 1, one, FieldClass::ComplexLike, SetPartition(2, {{0}, {1}})).empty());
}

TEST_CASE("path endpoints are non-crossing and refine the seed cycles") {
  const DimensionFunction ratios({Rational(1, 4), Rational(3, 4)});
  for (int k = 1; k <= 3; ++k) {
    const int words = 1 << (3 * k);
    for (int code = 0; code < words; ++code) {
      OWord u;
      for (int m = 0; m < k; ++m) {
        const int bits = (code >> (3 * m)) & 7;
        u.push_back({bits & 1, (bits >> 1) & 1, (bits >> 2) & 1});
      }
      auto [b, w] = encode_word(u);
      if (!b.is_admissible(ratios)) continue;
      const SetPartition seed_cycles = cycle_partition(b.pairing);
      for (auto fc : {FieldClass::RealLike, FieldClass::ComplexLike})
        for (int s = 0; s < k; ++s)
          for (const auto& path : enumerate_paths(b, w, s, ratios, fc)) {
            const SetPartition full = cycle_partition(path.endpoint.pairing);
            const std::vector<int> slots(full.labels().begin(), full.labels().begin() + k);
            CHECK_FALSE(oracle::crossing(slots));
            const std::vector<int> seed_slots(seed_cycles.labels().begin(), seed_cycles.labels().begin() + k);
            CHECK(oracle::refines(slots, seed_slots));
          }
    }
  }
}

TEST_CASE("limit cumulant coefficients") {
  const DimensionFunction ratios({Rational(1, 4), Rational(3, 4)});
  const auto single = cumulant_seed({0}, {0}, {false}, {0});
  CHECK(limit_cumulant_coefficient(nc(1, {{0}}), single, ratios) == MomentFunction(Rational(-1, 2), {1}));
  CHECK(limit_cumulant_coefficient(nc(1, {{0}}), cumulant_seed({0}, {1}, {false}, {0}), ratios).is_zero());
  for (int k = 2; k <= 3; ++k) {
    std::vector<int> letters(k, 0);
    letters.back() = 1;
    const auto seed = cumulant_seed(std::vector<int>(k, 1), std::vector<int>(k, 1), std::vector<bool>(k, false), letters);
    CHECK(limit_cumulant_coefficient(NonCrossingPartition(SetPartition::one_block(k)), seed, ratios).is_zero());
  }
}

TEST_CASE("cumulant coefficients sum to the limit statistic") {
  const DimensionFunction ratios({Rational(1, 4), Rational(3, 4)});
  std::mt19937_64 rng(85);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 1 + trial % 3;
    std::vector<int> i(k), j(k), letters(k);
    std::vector<bool> star(k);
    for (int m = 0; m < k; ++m) {
      i[m] = static_cast<int>(rng() % 2);
      star[m] = rng() % 2 == 0;
      letters[m] = static_cast<int>(rng() % 2);
    }
    for (int m = 0; m < k; ++m) j[m] = i[(m + 1) % k];
    const auto seed = cumulant_seed(i, j, star, letters);
    MomentFunction sum;
    for (const auto& beta : enumerate_nc(k)) sum += limit_cumulant_coefficient(beta, seed, ratios);
    OWord u;
    for (int m = 0; m < k; ++m) u.push_back({i[m], j[m], star[m]});
    const auto basis = reachable_basis(seed, ratios, FieldClass::ComplexLike, true);
    const auto L = build_generator_limit(basis, seed.word, ratios, FieldClass::ComplexLike);
    CHECK(sum == exact_exponential(L, L.delta_diagonal()));
    if (!is_mixed(letters)) CHECK(sum == moment_of_word_limit(u, ratios));
  }
}
