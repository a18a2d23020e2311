// Moment generators on a reachable (diagram ⊗ word) basis: finite-dimension
// generators over R, C and H, their large-dimension limits, and the Schürmann
// triple of the free process.
#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "mfe/brauer.hpp"
#include "mfe/evaltrace.hpp"
#include "mfe/rational.hpp"

namespace mfe {

enum class FieldClass { RealLike, ComplexLike };
FieldClass field_class(Field f);

// A basis element: a coloured diagram (canonical orientation) and a word.
struct BasisIndex {
  ColouredDiagram diagram;
  Word word;
  auto operator<=>(const BasisIndex&) const = default;
  bool operator==(const BasisIndex&) const = default;
};

constexpr std::size_t kDefaultBasisBound = 20000;

// Per-letter time weights; letters beyond the list have weight 1.
using LetterWeights = std::vector<Rational>;

// Word condition for the elementary term (type, a, b).
bool word_admits(const Word& w, ElementaryType type, int a, int b, FieldClass fc);

// One elementary contribution r ∘ b.
struct ElementaryTerm {
  ElementaryType type;
  int letter;
  ColouredElementary step;
  ColouredDiagram target;
  std::vector<int> exponent;  // per kernel class: fnc_c(r∘b with loops) - fnc_c(b)
  int dnc;                    // sum of exponents
  bool creating;              // cycle- or loop-creating
};

// Admissible elementary terms of the word; with creating_only, only the
// cycle- or loop-creating ones.
std::vector<ElementaryTerm> elementary_terms(const ColouredDiagram& b, const Word& w, const DimensionFunction& df,
                                             FieldClass fc, bool creating_only);

struct GeneratorMatrix {
  std::vector<ColouredDiagram> basis;
  Word word;
  // Row i: (column, coefficient) with columns ascending; the drift is included
  // on the diagonal.
  std::vector<std::vector<std::pair<int, Rational>>> rows;
  Rational drift;
  LetterWeights weights;

  std::size_t size() const { return basis.size(); }
  int index_of(const ColouredDiagram& b) const;  // -1 if absent
  Rational entry(int i, int j) const;
  Eigen::MatrixXd dense() const;
  // Exact y = L x.
  std::vector<Rational> apply(const std::vector<Rational>& x) const;
  // Indicator of diagonally coloured basis elements.
  std::vector<Rational> delta_diagonal() const;
  bool operator==(const GeneratorMatrix& o) const;
};

// Closure of the seed under left multiplication by admissible elementary
// diagrams (word unchanged), in BFS order. With creating_only, only cycle- or
// loop-creating elementaries are followed (the support of the limit generator).
std::vector<ColouredDiagram> reachable_basis(const BasisIndex& seed, const DimensionFunction& df,
                                             FieldClass fc, bool creating_only = false,
                                             std::size_t bound = kDefaultBasisBound);

// Finite-dimension generator with the given integer or rational dims per colour.
GeneratorMatrix build_generator_finite(const std::vector<ColouredDiagram>& basis, const Word& word,
                                       Field field, const DimensionFunction& dims,
                                       const LetterWeights& weights = {});

// Limit generator for ratios r (normalized to sum one): drift -1/2 per weighted
// letter, and the cycle- or loop-creating elementary terms only.
GeneratorMatrix build_generator_limit(const std::vector<ColouredDiagram>& basis, const Word& word,
                                      const DimensionFunction& ratios, FieldClass fc,
                                      const LetterWeights& weights = {});

// Finite generator with dims r_c N, expanded as a Laurent polynomial in N.
// Each entry maps a power of N to its coefficient.
struct LaurentGenerator {
  std::vector<ColouredDiagram> basis;
  Word word;
  std::vector<std::map<int, std::map<int, Rational>>> rows;  // row -> column -> (power -> coeff)
  std::map<int, Rational> drift;                             // power -> coeff
  LetterWeights weights;

  // Coefficient of N^0; throws if a positive power is present.
  GeneratorMatrix leading() const;
  GeneratorMatrix evaluate(const Rational& N) const;
};
LaurentGenerator build_generator_laurent(const std::vector<ColouredDiagram>& basis, const Word& word,
                                         Field field, const DimensionFunction& ratios,
                                         const LetterWeights& weights = {});

// Drift per unit letter weight: -1/2, -(N-1)/(2N), -(2N+1)/(4N).
Rational drift_constant(Field f, const Rational& N);

// L_n(u) of the free process with n colours, via the encoded diagram.
Rational generator_free_process(const OWord& u, int n);

// Schürmann triple on words of the dual group: the cocycle as an n x n
// matrix and the generator, both exact.
using RationalMatrix = std::vector<std::vector<Rational>>;
RationalMatrix schurmann_eta(const OWord& u, int n);
Rational schurmann_L(const OWord& u, int n);
// Counit: product of delta_{ij} over the letters.
Rational counit(const OWord& u);

}  // namespace mfe
