// Solutions of the moment equations: numeric exponentials at finite dimension
// and exact closed forms in the large-dimension limit.
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "mfe/brauer.hpp"
#include "mfe/generators.hpp"
#include "mfe/rational.hpp"

namespace mfe {

// e^{rate t} Σ_j coeffs[j] t^j.
struct MomentTerm {
  Rational rate;
  std::vector<Rational> coeffs;
};

// A finite sum of exponential-polynomial terms with distinct rates, sorted by
// rate, trailing zero coefficients trimmed and zero terms dropped.
class MomentFunction {
 public:
  MomentFunction() = default;  // the zero function
  MomentFunction(const Rational& rate, std::vector<Rational> coeffs);
  static MomentFunction from_terms(std::vector<MomentTerm> terms);
  static MomentFunction constant(const Rational& c) { return MomentFunction(0, {c}); }

  const std::vector<MomentTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool single_rate() const { return terms_.size() <= 1; }
  // Rate and coefficients of a single-rate function (0 and [] for zero).
  Rational rate() const;
  std::vector<Rational> coeffs() const;
  int degree() const;  // largest polynomial degree, -1 for zero

  double operator()(double t) const;
  // j-th derivative at t = 0.
  Rational derivative_at_zero(int j) const;

  MomentFunction operator+(const MomentFunction& o) const;
  MomentFunction operator-(const MomentFunction& o) const;
  MomentFunction operator*(const MomentFunction& o) const;
  MomentFunction operator*(const Rational& s) const;
  MomentFunction& operator+=(const MomentFunction& o) { return *this = *this + o; }
  bool operator==(const MomentFunction& o) const;
  bool operator!=(const MomentFunction& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void normalize();
  std::vector<MomentTerm> terms_;
};

// {"rate": "p/q", "coeffs": [...]} for single-rate functions; a "terms" array
// of such objects is added when several rates occur.
nlohmann::json to_json(const MomentFunction& f);
MomentFunction moment_function_from_json(const nlohmann::json& j);

// Dense exponential by scaling and squaring with Padé approximants.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);
// e^{A} v without forming e^{A}: truncated Taylor series with scaling.
Eigen::VectorXd expmv(const GeneratorMatrix& a, double t, const Eigen::VectorXd& v);

// Contraction of exp(tL) with the diagonal indicator at the seed coordinate.
double evolve_finite(const BasisIndex& seed, double t, Field field, const DimensionFunction& dims,
                     const LetterWeights& weights = {});
// Same, for every basis element of an already built generator.
Eigen::VectorXd evolve_finite_all(const GeneratorMatrix& L, double t);

// Row `row` of exp(tL) v in closed form, exact. Throws std::runtime_error if
// the exponential-polynomial ansatz fails the consistency check.
MomentFunction exact_exponential(const GeneratorMatrix& L, const std::vector<Rational>& v, int row = 0);

MomentFunction evolve_limit(const BasisIndex& seed, const DimensionFunction& ratios,
                            FieldClass fc = FieldClass::ComplexLike, const LetterWeights& weights = {});

// Statistics of a word of the dual group.
double moment_of_word_finite(const OWord& u, double t, Field field, const DimensionFunction& dims);
MomentFunction moment_of_word_limit(const OWord& u, const DimensionFunction& ratios,
                                    FieldClass fc = FieldClass::ComplexLike);

// The sub-diagram on a union of cycles, slots relabelled in increasing order.
std::pair<ColouredDiagram, Word> restrict_to_slots(const ColouredDiagram& b, const Word& w,
                                                   const std::vector<int>& slots);
// Product over the cycles of b of the limit statistics of the restrictions.
MomentFunction factorized_moment(const ColouredDiagram& b, const Word& w, const DimensionFunction& ratios,
                                 FieldClass fc = FieldClass::ComplexLike);

}  // namespace mfe
