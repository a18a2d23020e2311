// Free cumulants of the free unitary Brownian motion with n colours:
// moment-cumulant inversion, Taylor coefficients of the normalized moments,
// and the closed form of the cumulants of the generators.
#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "mfe/moments.hpp"
#include "mfe/ncpart.hpp"
#include "mfe/rational.hpp"

namespace mfe {

// A pair of colour sequences (i, j), 0-based, of common length p.
struct Colourization {
  std::vector<int> i;
  std::vector<int> j;

  int size() const { return static_cast<int>(i.size()); }
  // Throws std::invalid_argument unless lengths agree and values lie in [0, n).
  void validate(int n) const;
  // The word u_{i_1 j_1} ... u_{i_p j_p}.
  OWord word() const;
  auto operator<=>(const Colourization&) const = default;
  bool operator==(const Colourization&) const = default;
};

// (s . rho)_m = s_{rho(m)}.
std::vector<int> act(const std::vector<int>& s, const Permutation& rho);

// Transpositions tau with tau * sigma having one more cycle than sigma.
std::vector<Permutation> splitting_transpositions(const Permutation& sigma);

// Order-k coefficient of the normalized moment of the colourization on pi,
// computed by the one-step recursion over cycle-splitting transpositions:
// P^{σ,k}_{i,j} = (1/n) Σ_τ P^{τσ,k-1}_{i.τ,j}, P^{σ,0}_{i,j} = δ_{i,j}.
// With this convention e^{pt/2} φ_t(u_{i_1 j_1}...u_{i_p j_p}) has Taylor
// coefficients (-1)^k/k! P^{c_p,k}_{i,j}.
Rational taylor_coeff(const NonCrossingPartition& pi, int order, const Colourization& col, int n);

// e^{-pt/2} (-t/n)^{p-1} p^{p-2}/(p-1)! when j_m = i_{m+1} cyclically, else 0.
MomentFunction kappa_closed_form(int p, int n, const Colourization& col);

// k_p(a_1..a_p) = Σ_{π ∈ NC(p)} μ(π, 1_p) Π_{V ∈ π} φ(V), where phi receives
// the ordered slots of a block.
template <class T>
T free_cumulant(int p, const std::function<T(const std::vector<int>&)>& phi) {
  if (p < 1) throw std::invalid_argument("cumulant order must be positive");
  const auto top = NonCrossingPartition(SetPartition::one_block(p));
  T total{};
  bool first = true;
  for (const auto& pi : enumerate_nc(p)) {
    const Rational mu = mobius_nc(pi, top);
    T term = phi(pi.blocks().front());
    const auto blocks = pi.blocks();
    for (std::size_t b = 1; b < blocks.size(); ++b) term = term * phi(blocks[b]);
    term = term * mu;
    if (first) {
      total = term;
      first = false;
    } else {
      total = total + term;
    }
  }
  return total;
}

// Univariate free cumulants k_1..k_p from moments m_1..m_p; throws
// std::invalid_argument if fewer than p moments are given.
template <class T>
std::vector<T> cumulants_from_moments(const std::vector<T>& moments, int p) {
  if (p < 1 || static_cast<int>(moments.size()) < p) throw std::invalid_argument("insufficient moment data");
  std::vector<T> out;
  for (int q = 1; q <= p; ++q)
    out.push_back(free_cumulant<T>(q, [&](const std::vector<int>& v) { return moments[v.size() - 1]; }));
  return out;
}

// Moments m_1..m_p from cumulants k_1..k_p.
template <class T>
std::vector<T> moments_from_cumulants(const std::vector<T>& cumulants, int p) {
  if (p < 1 || static_cast<int>(cumulants.size()) < p) throw std::invalid_argument("insufficient cumulant data");
  std::vector<T> out;
  for (int q = 1; q <= p; ++q) {
    T total{};
    bool first = true;
    for (const auto& pi : enumerate_nc(q)) {
      const auto blocks = pi.blocks();
      T term = cumulants[blocks.front().size() - 1];
      for (std::size_t b = 1; b < blocks.size(); ++b) term = term * cumulants[blocks[b].size() - 1];
      total = first ? term : total + term;
      first = false;
    }
    out.push_back(total);
  }
  return out;
}

// Free cumulant of the generators u_{i_1 j_1}, ..., u_{i_p j_p} from the exact
// limit moments of their sub-words.
MomentFunction cumulant_of_generators(const Colourization& col, int n);

constexpr int kBianeBound = 6;
// e^{-pt/2} Σ_k (-t)^k/k! P_k with P_k the number of k-step cycle-splitting
// transposition paths starting at the full cycle, by enumeration.
MomentFunction biane_moment(int p);

}  // namespace mfe
