#include "mfe/cumulants.hpp"

#include <map>
#include <tuple>

namespace mfe {

void Colourization::validate(int n) const {
  if (i.size() != j.size()) throw std::invalid_argument("colourization sequences differ in length");
  if (i.empty()) throw std::invalid_argument("empty colourization");
  for (const auto* s : {&i, &j})
    for (int c : *s)
      if (c < 0 || c >= n) throw std::invalid_argument("colour out of range");
}

OWord Colourization::word() const {
  OWord u;
  for (std::size_t m = 0; m < i.size(); ++m) u.push_back({i[m], j[m], false});
  return u;
}

std::vector<int> act(const std::vector<int>& s, const Permutation& rho) {
  if (static_cast<int>(s.size()) != rho.size()) throw std::invalid_argument("size mismatch in colour action");
  std::vector<int> out(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) out[m] = s[rho(static_cast<int>(m))];
  return out;
}

std::vector<Permutation> splitting_transpositions(const Permutation& sigma) {
  const int p = sigma.size();
  const auto part = sigma.cycle_partition();
  std::vector<Permutation> out;
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      if (part.block_of(a) == part.block_of(b)) out.push_back(Permutation::transposition(p, a, b));
  return out;
}

namespace {

using Key = std::tuple<std::vector<int>, std::vector<int>, int>;

Rational taylor_rec(const Permutation& sigma, const std::vector<int>& i, const std::vector<int>& j, int order,
                    const Rational& inv_n, std::map<Key, Rational>& memo) {
  if (order == 0) return i == j ? Rational(1) : Rational(0);
  Key key{sigma.images(), i, order};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  Rational s = 0;
  for (const auto& tau : splitting_transpositions(sigma)) s += taylor_rec(tau * sigma, act(i, tau), j, order - 1, inv_n, memo);
  s *= inv_n;
  memo.emplace(std::move(key), s);
  return s;
}

}  // namespace

Rational taylor_coeff(const NonCrossingPartition& pi, int order, const Colourization& col, int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  col.validate(n);
  const int p = pi.size();
  if (col.size() != p) throw std::invalid_argument("colourization length differs from partition size");
  if (order < 0 || order > p - 1) throw std::out_of_range("order out of range");
  std::map<Key, Rational> memo;
  return taylor_rec(nc_to_permutation(pi), col.i, col.j, order, ratio(1, n), memo);
}

MomentFunction kappa_closed_form(int p, int n, const Colourization& col) {
  if (p < 1) throw std::invalid_argument("cumulant order must be positive");
  if (n < 1) throw std::invalid_argument("n must be positive");
  col.validate(n);
  if (col.size() != p) throw std::invalid_argument("colourization length differs from p");
  for (int m = 0; m < p; ++m)
    if (col.j[m] != col.i[(m + 1) % p]) return {};
  std::vector<Rational> coeffs(static_cast<std::size_t>(p), Rational(0));
  Rational c = pow(ratio(-1, n), p - 1) * pow(Rational(p), p - 2);
  c /= Rational(factorial(static_cast<unsigned long>(p - 1)));
  coeffs[p - 1] = c;
  return MomentFunction(ratio(-p, 2), coeffs);
}

MomentFunction cumulant_of_generators(const Colourization& col, int n) {
  col.validate(n);
  const auto ratios = DimensionFunction::uniform(n, ratio(1, n));
  std::map<std::vector<int>, MomentFunction> cache;
  std::function<MomentFunction(const std::vector<int>&)> phi = [&](const std::vector<int>& block) {
    auto it = cache.find(block);
    if (it != cache.end()) return it->second;
    OWord u;
    for (int m : block) u.push_back({col.i[m], col.j[m], false});
    auto f = moment_of_word_limit(u, ratios);
    cache.emplace(block, f);
    return f;
  };
  return free_cumulant<MomentFunction>(col.size(), phi);
}

MomentFunction biane_moment(int p) {
  if (p < 1) throw std::invalid_argument("p must be positive");
  if (p > kBianeBound) throw std::length_error("p exceeds the enumeration bound");
  // counts[k] = number of k-step splitting paths from the full cycle.
  std::map<Permutation, Integer> layer{{Permutation::full_cycle(p), Integer(1)}};
  std::vector<Integer> counts{Integer(1)};
  for (int k = 1; k < p; ++k) {
    std::map<Permutation, Integer> next;
    for (const auto& [sigma, c] : layer)
      for (const auto& tau : splitting_transpositions(sigma)) next[tau * sigma] += c;
    Integer total = 0;
    for (const auto& [sigma, c] : next) total += c;
    counts.push_back(total);
    layer = std::move(next);
  }
  std::vector<Rational> coeffs;
  for (int k = 0; k < p; ++k)
    coeffs.push_back(pow(Rational(-1), k) * Rational(counts[k]) / Rational(factorial(static_cast<unsigned long>(k))));
  return MomentFunction(ratio(-p, 2), coeffs);
}

}  // namespace mfe
