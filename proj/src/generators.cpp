#include "mfe/generators.hpp"

#include <deque>
#include <stdexcept>

namespace mfe {

FieldClass field_class(Field f) { return f == Field::C ? FieldClass::ComplexLike : FieldClass::RealLike; }

bool word_admits(const Word& w, ElementaryType type, int a, int b, FieldClass fc) {
  if (w[a].letter != w[b].letter) return false;
  if (fc == FieldClass::RealLike) return true;
  return type == ElementaryType::Tau ? w[a].bar == w[b].bar : w[a].bar != w[b].bar;
}

namespace {

Rational weight_of(const LetterWeights& weights, int letter) {
  return letter < static_cast<int>(weights.size()) ? weights[letter] : Rational(1);
}

Rational weighted_letters(const Word& w, const LetterWeights& weights) {
  Rational s = 0;
  for (const auto& l : w) s += weight_of(weights, l.letter);
  return s;
}

void check_word(const ColouredDiagram& b, const Word& w) {
  if (static_cast<int>(w.size()) != b.k()) throw std::invalid_argument("word length differs from diagram size");
}

GeneratorMatrix assemble(const std::vector<ColouredDiagram>& basis, const Word& word,
                         const std::vector<std::map<int, Rational>>& rows, const Rational& drift,
                         const LetterWeights& weights) {
  GeneratorMatrix g;
  g.weights = weights;
  g.basis = basis;
  g.word = word;
  g.drift = drift;
  g.rows.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, v] : rows[i])
      if (v != 0) g.rows[i].emplace_back(j, v);
  return g;
}

std::map<ColouredDiagram, int> index_map(const std::vector<ColouredDiagram>& basis) {
  std::map<ColouredDiagram, int> m;
  for (std::size_t i = 0; i < basis.size(); ++i) m.emplace(basis[i], static_cast<int>(i));
  return m;
}

int lookup(const std::map<ColouredDiagram, int>& m, const ColouredDiagram& b) {
  auto it = m.find(b);
  if (it == m.end()) throw std::invalid_argument("basis is not closed: missing " + to_text(b));
  return it->second;
}

DimensionFunction normalized(const DimensionFunction& ratios) {
  const Rational total = ratios.total();
  std::vector<Rational> r;
  for (const auto& v : ratios.dims()) r.push_back(v / total);
  return DimensionFunction(std::move(r));
}

}  // namespace

std::vector<ElementaryTerm> elementary_terms(const ColouredDiagram& b, const Word& w, const DimensionFunction& df,
                                             FieldClass fc, bool creating_only) {
  std::vector<ElementaryTerm> out;
  const ExtendedDiagram base{b, {}, {}};
  std::vector<int> fnc_b(static_cast<std::size_t>(df.class_count()));
  for (int c = 0; c < df.class_count(); ++c) fnc_b[c] = fnc(base, c, df);
  auto consider = [&](const std::vector<ColouredElementary>& els, bool creating) {
    for (const auto& r : els) {
      if (!word_admits(w, r.shape.type, r.shape.a, r.shape.b, fc)) continue;
      auto comp = compose(r.diagram, b, df);
      if (!comp) throw std::logic_error("non-mixing elementary produced a zero product");
      ElementaryTerm t{r.shape.type, w[r.shape.a].letter, r, comp->diagram, {}, 0, creating};
      t.exponent.resize(fnc_b.size());
      for (int c = 0; c < df.class_count(); ++c) {
        t.exponent[c] = fnc(*comp, c, df) - fnc_b[c];
        t.dnc += t.exponent[c];
      }
      out.push_back(std::move(t));
    }
  };
  if (creating_only) {
    consider(elementary_sets(b, ElementaryKind::TPlus, df), true);
    consider(elementary_sets(b, ElementaryKind::WPlus, df), true);
  } else {
    consider(elementary_sets(b, ElementaryKind::NonMixing, df), false);
  }
  return out;
}

int GeneratorMatrix::index_of(const ColouredDiagram& b) const {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == b) return static_cast<int>(i);
  return -1;
}

Rational GeneratorMatrix::entry(int i, int j) const {
  for (const auto& [c, v] : rows.at(i))
    if (c == j) return v;
  return 0;
}

Eigen::MatrixXd GeneratorMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, v] : rows[i]) m(static_cast<Eigen::Index>(i), j) = to_double(v);
  return m;
}

std::vector<Rational> GeneratorMatrix::apply(const std::vector<Rational>& x) const {
  if (x.size() != basis.size()) throw std::invalid_argument("vector size differs from basis size");
  std::vector<Rational> y(x.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Rational s = 0;
    for (const auto& [j, v] : rows[i])
      if (x[j] != 0) s += v * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<Rational> GeneratorMatrix::delta_diagonal() const {
  std::vector<Rational> d(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) d[i] = basis[i].is_diagonal() ? 1 : 0;
  return d;
}

bool GeneratorMatrix::operator==(const GeneratorMatrix& o) const {
  return basis == o.basis && word == o.word && rows == o.rows && drift == o.drift;
}

std::vector<ColouredDiagram> reachable_basis(const BasisIndex& seed, const DimensionFunction& df, FieldClass fc,
                                             bool creating_only, std::size_t bound) {
  check_word(seed.diagram, seed.word);
  if (!seed.diagram.is_valid(df)) throw std::invalid_argument("seed diagram invalid under the dimension function");
  std::vector<ColouredDiagram> order{seed.diagram};
  std::map<ColouredDiagram, int> seen{{seed.diagram, 0}};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const ColouredDiagram b = order[queue.front()];
    queue.pop_front();
    for (const auto& t : elementary_terms(b, seed.word, df, fc, creating_only)) {
      if (seen.count(t.target)) continue;
      if (order.size() >= bound) throw std::length_error("reachable basis exceeds the configured bound");
      seen.emplace(t.target, static_cast<int>(order.size()));
      queue.push_back(static_cast<int>(order.size()));
      order.push_back(t.target);
    }
  }
  return order;
}

Rational drift_constant(Field f, const Rational& N) {
  switch (f) {
    case Field::C: return Rational(-1, 2);
    case Field::R: return -(N - 1) / (2 * N);
    case Field::H: return -(2 * N + 1) / (4 * N);
  }
  throw std::logic_error("unknown field");
}

GeneratorMatrix build_generator_finite(const std::vector<ColouredDiagram>& basis, const Word& word, Field field,
                                       const DimensionFunction& dims, const LetterWeights& weights) {
  if (basis.empty()) throw std::invalid_argument("empty basis");
  check_word(basis.front(), word);
  const auto idx = index_map(basis);
  const Rational N = dims.total();
  const Rational drift = drift_constant(field, N) * weighted_letters(word, weights);
  const FieldClass fc = field_class(field);
  std::vector<std::map<int, Rational>> rows(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    rows[i][static_cast<int>(i)] += drift;
    for (const auto& t : elementary_terms(basis[i], word, dims, fc, false)) {
      Rational c = weight_of(weights, t.letter) / N;
      if (t.type == ElementaryType::Tau) c = -c;
      for (int cls = 0; cls < dims.class_count(); ++cls) c *= pow(dims.class_dim(cls), t.exponent[cls]);
      if (field == Field::H) c *= pow(Rational(-2), t.dnc - 1);
      rows[i][lookup(idx, t.target)] += c;
    }
  }
  return assemble(basis, word, rows, drift, weights);
}

GeneratorMatrix build_generator_limit(const std::vector<ColouredDiagram>& basis, const Word& word,
                                      const DimensionFunction& ratios_in, FieldClass fc,
                                      const LetterWeights& weights) {
  if (basis.empty()) throw std::invalid_argument("empty basis");
  check_word(basis.front(), word);
  const DimensionFunction ratios = normalized(ratios_in);
  const auto idx = index_map(basis);
  const Rational drift = Rational(-1, 2) * weighted_letters(word, weights);
  std::vector<std::map<int, Rational>> rows(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    rows[i][static_cast<int>(i)] += drift;
    for (const auto& t : elementary_terms(basis[i], word, ratios, fc, true)) {
      Rational c = weight_of(weights, t.letter);
      if (t.type == ElementaryType::Tau) c = -c;
      for (int cls = 0; cls < ratios.class_count(); ++cls) c *= pow(ratios.class_dim(cls), t.exponent[cls]);
      rows[i][lookup(idx, t.target)] += c;
    }
  }
  return assemble(basis, word, rows, drift, weights);
}

LaurentGenerator build_generator_laurent(const std::vector<ColouredDiagram>& basis, const Word& word, Field field,
                                         const DimensionFunction& ratios_in, const LetterWeights& weights) {
  if (basis.empty()) throw std::invalid_argument("empty basis");
  check_word(basis.front(), word);
  const DimensionFunction ratios = normalized(ratios_in);
  const auto idx = index_map(basis);
  const FieldClass fc = field_class(field);
  const Rational W = weighted_letters(word, weights);
  // Drift as a Laurent polynomial in N.
  std::map<int, Rational> drift;
  switch (field) {
    case Field::C: drift[0] = -W / 2; break;
    case Field::R:
      drift[0] = -W / 2;
      drift[-1] = W / 2;
      break;
    case Field::H:
      drift[0] = -W / 2;
      drift[-1] = -W / 4;
      break;
  }
  LaurentGenerator g;
  g.weights = weights;
  g.basis = basis;
  g.word = word;
  g.drift = drift;
  g.rows.resize(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (const auto& [p, v] : drift) g.rows[i][static_cast<int>(i)][p] += v;
    for (const auto& t : elementary_terms(basis[i], word, ratios, fc, false)) {
      Rational c = weight_of(weights, t.letter);
      if (t.type == ElementaryType::Tau) c = -c;
      for (int cls = 0; cls < ratios.class_count(); ++cls) c *= pow(ratios.class_dim(cls), t.exponent[cls]);
      if (field == Field::H) c *= pow(Rational(-2), t.dnc - 1);
      g.rows[i][lookup(idx, t.target)][t.dnc - 1] += c;
    }
  }
  return g;
}

GeneratorMatrix LaurentGenerator::leading() const {
  std::vector<std::map<int, Rational>> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, poly] : rows[i]) {
      for (const auto& [p, v] : poly) {
        if (p > 0 && v != 0) throw std::domain_error("generator entry grows with N");
        if (p == 0) out[i][j] += v;
      }
    }
  }
  auto it = drift.find(0);
  return assemble(basis, word, out, it == drift.end() ? Rational(0) : it->second, weights);
}

GeneratorMatrix LaurentGenerator::evaluate(const Rational& N) const {
  std::vector<std::map<int, Rational>> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, poly] : rows[i])
      for (const auto& [p, v] : poly) out[i][j] += v * pow(N, p);
  Rational d = 0;
  for (const auto& [p, v] : drift) d += v * pow(N, p);
  return assemble(basis, word, out, d, weights);
}

Rational generator_free_process(const OWord& u, int n) {
  if (u.empty()) throw std::invalid_argument("empty word");
  if (n < 1) throw std::invalid_argument("n must be positive");
  for (const auto& l : u)
    if (l.i >= n || l.j >= n) throw std::invalid_argument("index exceeds n");
  auto [b, w] = encode_word(u);
  const auto ratios = DimensionFunction::uniform(n, ratio(1, n));
  const auto basis = reachable_basis({b, w}, ratios, FieldClass::ComplexLike, true);
  const auto L = build_generator_limit(basis, w, ratios, FieldClass::ComplexLike);
  Rational v = 0;
  for (const auto& [j, c] : L.rows[0])
    if (basis[j].is_diagonal()) v += c;
  return v;
}

// ---------------------------------------------------------------- Schürmann

namespace {

Rational letter_counit(const OLetter& l) { return l.i == l.j ? 1 : 0; }

OWord star_word(const OWord& u) {
  OWord out(u.rbegin(), u.rend());
  for (auto& l : out) {
    l.star = !l.star;
    std::swap(l.i, l.j);
  }
  return out;
}

RationalMatrix zero(int n) { return RationalMatrix(n, std::vector<Rational>(n, Rational(0))); }

// <X, Y> = (1/n) tr(X* Y) for real matrices.
Rational pairing(const RationalMatrix& x, const RationalMatrix& y) {
  const int n = static_cast<int>(x.size());
  Rational s = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += x[a][b] * y[a][b];
  return s / n;
}

}  // namespace

Rational counit(const OWord& u) {
  Rational e = 1;
  for (const auto& l : u) e *= letter_counit(l);
  return e;
}

RationalMatrix schurmann_eta(const OWord& u, int n) {
  RationalMatrix eta = zero(n);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k].i >= n || u[k].j >= n) throw std::invalid_argument("index exceeds n");
    Rational others = 1;
    for (std::size_t m = 0; m < u.size(); ++m)
      if (m != k) others *= letter_counit(u[m]);
    if (others == 0) continue;
    eta[u[k].i][u[k].j] += u[k].star ? Rational(-others) : others;
  }
  return eta;
}

Rational schurmann_L(const OWord& u, int n) {
  if (u.empty()) return 0;
  if (u.size() == 1) {
    if (u[0].i >= n || u[0].j >= n) throw std::invalid_argument("index exceeds n");
    return u[0].i == u[0].j ? Rational(-1, 2) : Rational(0);
  }
  const OWord head(u.begin(), u.end() - 1);
  const OWord tail{u.back()};
  return counit(head) * schurmann_L(tail, n) + schurmann_L(head, n) * counit(tail) +
         pairing(schurmann_eta(star_word(head), n), schurmann_eta(tail, n));
}

}  // namespace mfe
