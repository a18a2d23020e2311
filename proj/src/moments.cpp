#include "mfe/moments.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mfe {

// ---------------------------------------------------------- MomentFunction

MomentFunction::MomentFunction(const Rational& rate, std::vector<Rational> coeffs) {
  terms_.push_back({rate, std::move(coeffs)});
  normalize();
}

MomentFunction MomentFunction::from_terms(std::vector<MomentTerm> terms) {
  MomentFunction f;
  f.terms_ = std::move(terms);
  f.normalize();
  return f;
}

void MomentFunction::normalize() {
  std::map<Rational, std::vector<Rational>> merged;
  for (auto& t : terms_) {
    t.rate.canonicalize();
    for (auto& x : t.coeffs) x.canonicalize();
    auto& c = merged[t.rate];
    if (c.size() < t.coeffs.size()) c.resize(t.coeffs.size(), Rational(0));
    for (std::size_t j = 0; j < t.coeffs.size(); ++j) c[j] += t.coeffs[j];
  }
  terms_.clear();
  for (auto& [rate, c] : merged) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (!c.empty()) terms_.push_back({rate, std::move(c)});
  }
}

Rational MomentFunction::rate() const {
  if (terms_.size() > 1) throw std::logic_error("moment function has several rates");
  return terms_.empty() ? Rational(0) : terms_.front().rate;
}

std::vector<Rational> MomentFunction::coeffs() const {
  if (terms_.size() > 1) throw std::logic_error("moment function has several rates");
  return terms_.empty() ? std::vector<Rational>{} : terms_.front().coeffs;
}

int MomentFunction::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.coeffs.size()) - 1);
  return d;
}

double MomentFunction::operator()(double t) const {
  double s = 0;
  for (const auto& term : terms_) {
    double p = 0;
    for (auto it = term.coeffs.rbegin(); it != term.coeffs.rend(); ++it) p = p * t + to_double(*it);
    s += std::exp(to_double(term.rate) * t) * p;
  }
  return s;
}

Rational MomentFunction::derivative_at_zero(int j) const {
  // d^j/dt^j [t^m e^{λt}] at 0 = j!/(j-m)! λ^{j-m} for m <= j.
  Rational s = 0;
  for (const auto& term : terms_) {
    for (int m = 0; m < static_cast<int>(term.coeffs.size()) && m <= j; ++m) {
      if (term.coeffs[m] == 0) continue;
      Rational f(factorial(static_cast<unsigned long>(j)) / factorial(static_cast<unsigned long>(j - m)));
      s += term.coeffs[m] * f * pow(term.rate, j - m);
    }
  }
  return s;
}

MomentFunction MomentFunction::operator+(const MomentFunction& o) const {
  auto t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(t));
}

MomentFunction MomentFunction::operator-(const MomentFunction& o) const { return *this + o * Rational(-1); }

MomentFunction MomentFunction::operator*(const MomentFunction& o) const {
  std::vector<MomentTerm> out;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      MomentTerm t{a.rate + b.rate, std::vector<Rational>(a.coeffs.size() + b.coeffs.size() - 1, Rational(0))};
      for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) t.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
      out.push_back(std::move(t));
    }
  }
  return from_terms(std::move(out));
}

MomentFunction MomentFunction::operator*(const Rational& s) const {
  auto t = terms_;
  for (auto& term : t)
    for (auto& c : term.coeffs) c *= s;
  return from_terms(std::move(t));
}

bool MomentFunction::operator==(const MomentFunction& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].rate != o.terms_[i].rate || terms_[i].coeffs != o.terms_[i].coeffs) return false;
  return true;
}

std::string MomentFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " + ";
    os << "exp(" << mfe::to_string(terms_[i].rate) << " t)*(";
    for (std::size_t j = 0; j < terms_[i].coeffs.size(); ++j) {
      if (j) os << " + ";
      os << mfe::to_string(terms_[i].coeffs[j]);
      if (j == 1) os << " t";
      if (j > 1) os << " t^" << j;
    }
    os << ')';
  }
  return os.str();
}

namespace {

nlohmann::json term_json(const Rational& rate, const std::vector<Rational>& coeffs) {
  nlohmann::json j;
  j["rate"] = mfe::to_string(rate);
  j["coeffs"] = nlohmann::json::array();
  for (const auto& c : coeffs) j["coeffs"].push_back(mfe::to_string(c));
  return j;
}

}  // namespace

nlohmann::json to_json(const MomentFunction& f) {
  if (f.single_rate()) return term_json(f.rate(), f.coeffs());
  nlohmann::json j = term_json(f.terms().front().rate, f.terms().front().coeffs);
  j["terms"] = nlohmann::json::array();
  for (const auto& t : f.terms()) j["terms"].push_back(term_json(t.rate, t.coeffs));
  return j;
}

MomentFunction moment_function_from_json(const nlohmann::json& j) {
  auto one = [](const nlohmann::json& o) {
    MomentTerm t{parse_rational(o.at("rate").get<std::string>()), {}};
    for (const auto& c : o.at("coeffs")) t.coeffs.push_back(parse_rational(c.get<std::string>()));
    return t;
  };
  if (j.contains("terms")) {
    std::vector<MomentTerm> terms;
    for (const auto& o : j.at("terms")) terms.push_back(one(o));
    return MomentFunction::from_terms(std::move(terms));
  }
  return MomentFunction::from_terms({one(j)});
}

// ------------------------------------------------------------ exponentials

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return a.exp(); }

Eigen::VectorXd expmv(const GeneratorMatrix& a, double t, const Eigen::VectorXd& v) {
  const std::size_t n = a.size();
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  double norm1 = 0;
  {
    std::vector<double> colsum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [j, c] : a.rows[i]) {
        rows[i].emplace_back(j, to_double(c));
        colsum[j] += std::abs(to_double(c));
      }
    for (double c : colsum) norm1 = std::max(norm1, c);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * norm1)));
  const double h = t / steps;
  Eigen::VectorXd w = v;
  Eigen::VectorXd term(static_cast<Eigen::Index>(n)), next(static_cast<Eigen::Index>(n));
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd acc = w;
    term = w;
    int small = 0;
    for (int j = 1; j < 200 && small < 2; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        double x = 0;
        for (const auto& [c, val] : rows[i]) x += val * term[c];
        next[static_cast<Eigen::Index>(i)] = x * h / j;
      }
      term.swap(next);
      acc += term;
      small = term.lpNorm<Eigen::Infinity>() <= 1e-17 * std::max(1.0, acc.lpNorm<Eigen::Infinity>()) ? small + 1 : 0;
    }
    w = acc;
  }
  return w;
}

Eigen::VectorXd evolve_finite_all(const GeneratorMatrix& L, double t) {
  if (t < 0) throw std::invalid_argument("time must be nonnegative");
  Eigen::VectorXd v(static_cast<Eigen::Index>(L.size()));
  for (std::size_t i = 0; i < L.size(); ++i) v[static_cast<Eigen::Index>(i)] = L.basis[i].is_diagonal() ? 1.0 : 0.0;
  if (L.size() <= 400) return expm(L.dense() * t) * v;
  return expmv(L, t, v);
}

double evolve_finite(const BasisIndex& seed, double t, Field field, const DimensionFunction& dims,
                     const LetterWeights& weights) {
  if (!seed.diagram.is_admissible(dims)) return 0.0;
  const auto basis = reachable_basis(seed, dims, field_class(field));
  const auto L = build_generator_finite(basis, seed.word, field, dims, weights);
  return evolve_finite_all(L, t)[0];
}

// ---------------------------------------------------------- exact solution

namespace {

// Solves A x = b exactly; A square and nonsingular.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> A, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) throw std::runtime_error("singular confluent Vandermonde system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      const Rational f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= A[i][i];
  return b;
}

// Per letter, the largest number of top-row pairs {a', b'} whose slots both
// carry that letter, over the basis.
std::map<int, int> top_pair_bounds(const GeneratorMatrix& L) {
  std::map<int, int> best;
  for (const auto& b : L.basis) {
    const int k = b.k();
    std::map<int, int> here;
    for (auto [x, y] : b.pairing.pairs())
      if (x >= k && L.word[x - k].letter == L.word[y - k].letter) ++here[L.word[x - k].letter];
    for (auto [l, n] : here) best[l] = std::max(best[l], n);
  }
  return best;
}

Rational letter_weight(const GeneratorMatrix& L, int letter) {
  return letter < static_cast<int>(L.weights.size()) ? L.weights[letter] : Rational(1);
}

// j!/(j-m)! λ^{j-m}, the j-th derivative of t^m e^{λt} at zero.
Rational confluent_entry(int j, int m, const Rational& lambda) {
  if (m > j) return 0;
  Rational f(factorial(static_cast<unsigned long>(j)) / factorial(static_cast<unsigned long>(j - m)));
  return f * pow(lambda, j - m);
}

}  // namespace

MomentFunction exact_exponential(const GeneratorMatrix& L, const std::vector<Rational>& v, int row) {
  if (L.size() == 0) throw std::invalid_argument("empty generator");
  if (v.size() != L.size()) throw std::invalid_argument("vector size differs from generator size");
  if (row < 0 || row >= static_cast<int>(L.size())) throw std::out_of_range("row out of range");
  const int k = L.basis.front().k();
  const Rational lambda0 = L.drift;

  // Rates λ0 + Σ_i w_i j_i with 0 <= j_i <= J_i.
  std::vector<Rational> rates{lambda0};
  for (auto [letter, bound] : top_pair_bounds(L)) {
    const Rational w = letter_weight(L, letter);
    std::vector<Rational> next;
    for (const auto& r : rates)
      for (int j = 0; j <= bound; ++j) next.push_back(r + w * j);
    rates = std::move(next);
  }
  std::sort(rates.begin(), rates.end());
  rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

  if (rates.size() == 1) {
    // L - λ0 is nilpotent on the orbit of v: sum the finite series.
    std::vector<Rational> coeffs;
    std::vector<Rational> w = v;
    for (int j = 0;; ++j) {
      bool zero = true;
      for (const auto& x : w) zero = zero && x == 0;
      if (zero) break;
      if (j >= k) throw std::runtime_error("nilpotent part has index above the diagram size");
      coeffs.push_back(w[row] / Rational(factorial(static_cast<unsigned long>(j))));
      auto Lw = L.apply(w);
      for (std::size_t i = 0; i < w.size(); ++i) Lw[i] -= lambda0 * w[i];
      w = std::move(Lw);
    }
    return MomentFunction(lambda0, coeffs);
  }

  // Match Taylor coefficients (L^j v)[row] against the confluent ansatz with
  // polynomial degree below k per rate, then check further coefficients.
  const int unknowns = static_cast<int>(rates.size()) * k;
  const int checks = 2 * k;
  std::vector<Rational> taylor;
  std::vector<Rational> w = v;
  for (int j = 0; j < unknowns + checks; ++j) {
    taylor.push_back(w[row]);
    w = L.apply(w);
  }
  std::vector<std::vector<Rational>> A(unknowns, std::vector<Rational>(unknowns));
  for (int j = 0; j < unknowns; ++j)
    for (std::size_t r = 0; r < rates.size(); ++r)
      for (int m = 0; m < k; ++m) A[j][r * k + m] = confluent_entry(j, m, rates[r]);
  const auto x = solve_exact(std::move(A), std::vector<Rational>(taylor.begin(), taylor.begin() + unknowns));
  for (int j = unknowns; j < unknowns + checks; ++j) {
    Rational s = 0;
    for (std::size_t r = 0; r < rates.size(); ++r)
      for (int m = 0; m < k; ++m) s += x[r * k + m] * confluent_entry(j, m, rates[r]);
    if (s != taylor[j]) throw std::runtime_error("exponential-polynomial ansatz inconsistent with the generator");
  }
  std::vector<MomentTerm> terms;
  for (std::size_t r = 0; r < rates.size(); ++r)
    terms.push_back({rates[r], std::vector<Rational>(x.begin() + r * k, x.begin() + (r + 1) * k)});
  return MomentFunction::from_terms(std::move(terms));
}

MomentFunction evolve_limit(const BasisIndex& seed, const DimensionFunction& ratios, FieldClass fc,
                            const LetterWeights& weights) {
  if (!seed.diagram.is_admissible(ratios)) return {};
  const auto basis = reachable_basis(seed, ratios, fc, true);
  const auto L = build_generator_limit(basis, seed.word, ratios, fc, weights);
  return exact_exponential(L, L.delta_diagonal(), 0);
}

namespace {

void check_indices(const OWord& u, int n) {
  if (u.empty()) throw std::invalid_argument("empty word");
  for (const auto& l : u)
    if (l.i >= n || l.j >= n) throw std::invalid_argument("word index exceeds the number of colours");
}

}  // namespace

double moment_of_word_finite(const OWord& u, double t, Field field, const DimensionFunction& dims) {
  check_indices(u, dims.colours());
  auto [b, w] = encode_word(u);
  return evolve_finite({b, w}, t, field, dims);
}

MomentFunction moment_of_word_limit(const OWord& u, const DimensionFunction& ratios, FieldClass fc) {
  check_indices(u, ratios.colours());
  auto [b, w] = encode_word(u);
  return evolve_limit({b, w}, ratios, fc);
}

std::pair<ColouredDiagram, Word> restrict_to_slots(const ColouredDiagram& b, const Word& w,
                                                   const std::vector<int>& slots_in) {
  const int k = b.k();
  std::vector<int> slots = slots_in;
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  const int m = static_cast<int>(slots.size());
  std::vector<int> pos(k, -1);
  for (int i = 0; i < m; ++i) {
    if (slots[i] < 0 || slots[i] >= k) throw std::out_of_range("slot out of range");
    pos[slots[i]] = i;
  }
  auto map_point = [&](int x) {
    const int p = pos[x % k];
    if (p < 0) throw std::invalid_argument("slots are not a union of cycles");
    return x < k ? p : m + p;
  };
  std::vector<int> match(2 * m), colour(2 * m);
  Word sub;
  for (int i = 0; i < m; ++i) {
    for (int x : {slots[i], k + slots[i]}) {
      match[map_point(x)] = map_point(b.pairing.partner(x));
      colour[map_point(x)] = b.colour[x];
    }
    sub.push_back(w[slots[i]]);
  }
  return {ColouredDiagram{Pairing(std::move(match)), std::move(colour)}, std::move(sub)};
}

MomentFunction factorized_moment(const ColouredDiagram& b, const Word& w, const DimensionFunction& ratios,
                                 FieldClass fc) {
  if (!b.is_admissible(ratios)) return {};
  MomentFunction out = MomentFunction::constant(1);
  const SetPartition full = cycle_partition(b.pairing);
  for (const auto& block : full.blocks()) {
    std::vector<int> slots;
    for (int x : block)
      if (x < b.k()) slots.push_back(x);
    auto [sb, sw] = restrict_to_slots(b, w, slots);
    out = out * evolve_limit({sb, sw}, ratios, fc);
  }
  return out;
}

}  // namespace mfe
