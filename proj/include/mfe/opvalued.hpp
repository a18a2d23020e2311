// Operator-valued probability over the algebra D_n spanned by the block
// projectors: conditional expectation, nested E_π, amalgamated cumulants, and
// the path expansion of the limit statistics.
#pragma once

#include <optional>
#include <vector>

#include "mfe/brauer.hpp"
#include "mfe/evaltrace.hpp"
#include "mfe/generators.hpp"
#include "mfe/moments.hpp"
#include "mfe/ncpart.hpp"
#include "mfe/rmt.hpp"

namespace mfe {

// Σ_i values[i] p_i; operations are componentwise.
struct DiagonalElement {
  std::vector<Complex> values;

  int size() const { return static_cast<int>(values.size()); }
  DiagonalElement operator+(const DiagonalElement& o) const;
  DiagonalElement operator-(const DiagonalElement& o) const;
  DiagonalElement operator*(const DiagonalElement& o) const;
  DiagonalElement operator*(double s) const;
  DiagonalElement star() const;
  double max_abs() const;
  static DiagonalElement zero(int n) { return {std::vector<Complex>(static_cast<std::size_t>(n))}; }
};

// D · A and A · D as block matrices.
BlockMatrix left_multiply(const DiagonalElement& d, const BlockMatrix& a);
BlockMatrix right_multiply(const BlockMatrix& a, const DiagonalElement& d);
BlockMatrix multiply(const BlockMatrix& a, const BlockMatrix& b);
// p_i A p_j.
BlockMatrix compress(const BlockMatrix& a, int i, int j);

// E[A] = Σ_i (1/d_i) Tr(p_i A p_i) p_i, with Re Tr over the quaternions.
DiagonalElement cond_expectation(const BlockMatrix& a);

// Nested conditional expectation along pi: interval blocks are evaluated
// first and multiplied back into their neighbour.
DiagonalElement e_pi(const NonCrossingPartition& pi, const std::vector<BlockMatrix>& mats);

// c_π = Σ_{γ ≤ π} μ(γ, π) E_γ.
DiagonalElement amalgamated_cumulant(const NonCrossingPartition& pi, const std::vector<BlockMatrix>& mats);

// A sequence of creating elementary steps from a seed.
struct PathTuple {
  std::vector<ColouredElementary> steps;
  std::vector<std::vector<int>> exponents;  // per step, per kernel class
  std::vector<ElementaryType> types;
  std::vector<int> letters;
  ColouredDiagram endpoint;
  LoopCounts loops;

  // Π_l sign_l · w_{letter_l} · Π_c r_c^{e_{l,c}} for normalized ratios.
  Rational coefficient(const DimensionFunction& ratios, const LetterWeights& weights = {}) const;
};

// All length-s tuples of cycle- or loop-creating admissible elementary steps,
// optionally keeping only endpoints whose cycle partition equals beta.
std::vector<PathTuple> enumerate_paths(const ColouredDiagram& b, const Word& w, int s,
                                       const DimensionFunction& ratios, FieldClass fc = FieldClass::ComplexLike,
                                       const std::optional<SetPartition>& beta = std::nullopt);

// The seed of a colour tuple (i, j) with star pattern and letters.
BasisIndex cumulant_seed(const std::vector<int>& i, const std::vector<int>& j, const std::vector<bool>& star,
                         const std::vector<int>& letters, FieldClass fc = FieldClass::ComplexLike);

// Limit statistic of the seed restricted to paths whose endpoint cycle
// partition is the Kreweras complement of beta, contracted with δ_Δ.
MomentFunction limit_cumulant_coefficient(const NonCrossingPartition& beta, const BasisIndex& seed,
                                          const DimensionFunction& ratios, FieldClass fc = FieldClass::ComplexLike,
                                          const LetterWeights& weights = {});

// One argument of a Monte-Carlo amalgamated statistic: process `process`
// (adjoint when star), compressed to p_row · p_col unless row or col is -1.
struct AmalgamatedArgument {
  int process = 0;
  bool star = false;
  int row = -1;
  int col = -1;
};

struct AmalgamatedEstimate {
  NonCrossingPartition pi;
  double t = 0;
  std::vector<Estimate> e_pi;  // Re of each component of E_π
  std::vector<Estimate> c_pi;  // Re of each component of c_π
};

// Monte-Carlo estimates of E_π and c_π for every π in NC(k), at every time of
// cfg; cfg.processes is raised to cover the arguments. Ordered by time, then by
// the enumeration order of NC(k).
std::vector<AmalgamatedEstimate> estimate_amalgamated(const std::vector<AmalgamatedArgument>& args,
                                                      const McConfig& cfg);

}  // namespace mfe
