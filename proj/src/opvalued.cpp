#include "mfe/opvalued.hpp"

#include <algorithm>
#include <stdexcept>

namespace mfe {

// -------------------------------------------------------- DiagonalElement

namespace {

void check_same_size(const DiagonalElement& a, const DiagonalElement& b) {
  if (a.size() != b.size()) throw std::invalid_argument("diagonal elements of different sizes");
}

}  // namespace

DiagonalElement DiagonalElement::operator+(const DiagonalElement& o) const {
  check_same_size(*this, o);
  DiagonalElement r = *this;
  for (int i = 0; i < size(); ++i) r.values[i] += o.values[i];
  return r;
}

DiagonalElement DiagonalElement::operator-(const DiagonalElement& o) const {
  check_same_size(*this, o);
  DiagonalElement r = *this;
  for (int i = 0; i < size(); ++i) r.values[i] -= o.values[i];
  return r;
}

DiagonalElement DiagonalElement::operator*(const DiagonalElement& o) const {
  check_same_size(*this, o);
  DiagonalElement r = *this;
  for (int i = 0; i < size(); ++i) r.values[i] *= o.values[i];
  return r;
}

DiagonalElement DiagonalElement::operator*(double s) const {
  DiagonalElement r = *this;
  for (auto& v : r.values) v *= s;
  return r;
}

DiagonalElement DiagonalElement::star() const {
  DiagonalElement r = *this;
  for (auto& v : r.values) v = std::conj(v);
  return r;
}

double DiagonalElement::max_abs() const {
  double m = 0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------- block algebra

namespace {

// Multiplies rows (left) or columns (right) of each block band by a scalar.
BlockMatrix scale_bands(const BlockMatrix& a, const DiagonalElement& d, bool left) {
  if (d.size() != static_cast<int>(a.dims.size())) throw std::invalid_argument("diagonal element size differs from block count");
  FieldMatrix m = a.entries;
  for (int c = 0; c < d.size(); ++c) {
    const Eigen::Index off = a.offset(c), len = a.dims[c];
    const Complex v = d.values[c];
    std::visit(
        [&](auto& x) {
          using M = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<M, Eigen::MatrixXcd>) {
            if (left) x.middleRows(off, len) *= v;
            else x.middleCols(off, len) *= v;
          } else if constexpr (std::is_same_v<M, Eigen::MatrixXd>) {
            if (left) x.middleRows(off, len) *= v.real();
            else x.middleCols(off, len) *= v.real();
          } else {
            for (auto* comp : {&x.a, &x.b, &x.c, &x.d}) {
              if (left) comp->middleRows(off, len) *= v.real();
              else comp->middleCols(off, len) *= v.real();
            }
          }
        },
        m);
  }
  return BlockMatrix(std::move(m), a.dims);
}

}  // namespace

BlockMatrix left_multiply(const DiagonalElement& d, const BlockMatrix& a) { return scale_bands(a, d, true); }
BlockMatrix right_multiply(const BlockMatrix& a, const DiagonalElement& d) { return scale_bands(a, d, false); }

BlockMatrix multiply(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.dims != b.dims) throw std::invalid_argument("block matrices are not conformable");
  return BlockMatrix(multiply(a.entries, b.entries), a.dims);
}

BlockMatrix compress(const BlockMatrix& a, int i, int j) {
  const int n = static_cast<int>(a.dims.size());
  DiagonalElement pi = DiagonalElement::zero(n), pj = DiagonalElement::zero(n);
  pi.values.at(i) = 1;
  pj.values.at(j) = 1;
  return right_multiply(left_multiply(pi, a), pj);
}

DiagonalElement cond_expectation(const BlockMatrix& a) {
  const int n = static_cast<int>(a.dims.size());
  DiagonalElement out = DiagonalElement::zero(n);
  for (int c = 0; c < n; ++c) out.values[c] = field_trace(a.block(c, c)) / static_cast<double>(a.dims[c]);
  return out;
}

DiagonalElement e_pi(const NonCrossingPartition& pi, const std::vector<BlockMatrix>& mats_in) {
  const int k = pi.size();
  if (static_cast<int>(mats_in.size()) != k) throw std::invalid_argument("partition size differs from argument count");
  if (k == 0) throw std::invalid_argument("no arguments");
  for (const auto& m : mats_in)
    if (m.dims != mats_in.front().dims) throw std::invalid_argument("block matrices are not conformable");
  std::vector<BlockMatrix> mats = mats_in;
  std::vector<int> label = pi.underlying().labels();
  auto product = [&](std::size_t from, std::size_t to) {
    BlockMatrix p = mats[from];
    for (std::size_t q = from + 1; q < to; ++q) p = multiply(p, mats[q]);
    return p;
  };
  while (true) {
    const std::size_t len = mats.size();
    bool single = std::all_of(label.begin(), label.end(), [&](int l) { return l == label.front(); });
    if (single) return cond_expectation(product(0, len));
    // Find a block occupying an interval of the current positions.
    std::size_t from = 0, to = 0;
    bool found = false;
    for (std::size_t s = 0; s < len && !found; ++s) {
      std::size_t e = s;
      while (e < len && label[e] == label[s]) ++e;
      bool elsewhere = false;
      for (std::size_t q = 0; q < len; ++q)
        if ((q < s || q >= e) && label[q] == label[s]) elsewhere = true;
      if (!elsewhere) {
        from = s;
        to = e;
        found = true;
      }
      s = e - 1;
    }
    if (!found) throw std::logic_error("partition has no interval block");
    const DiagonalElement d = cond_expectation(product(from, to));
    if (to < len) mats[to] = left_multiply(d, mats[to]);
    else mats[from - 1] = right_multiply(mats[from - 1], d);
    mats.erase(mats.begin() + static_cast<std::ptrdiff_t>(from), mats.begin() + static_cast<std::ptrdiff_t>(to));
    label.erase(label.begin() + static_cast<std::ptrdiff_t>(from), label.begin() + static_cast<std::ptrdiff_t>(to));
  }
}

DiagonalElement amalgamated_cumulant(const NonCrossingPartition& pi, const std::vector<BlockMatrix>& mats) {
  if (mats.empty()) throw std::invalid_argument("no arguments");
  DiagonalElement total = DiagonalElement::zero(static_cast<int>(mats.front().dims.size()));
  for (const auto& gamma : enumerate_nc(pi.size())) {
    if (!gamma.leq(pi)) continue;
    const double mu = to_double(mobius_nc(gamma, pi));
    if (mu == 0) continue;
    total = total + e_pi(gamma, mats) * mu;
  }
  return total;
}

// ------------------------------------------------------------------- paths

namespace {

// Cycle partition of a diagram read on the slots {0..k-1}.
SetPartition slot_cycles(const Pairing& b) {
  const SetPartition full = cycle_partition(b);
  const auto& labels = full.labels();
  return SetPartition::from_labels(std::vector<int>(labels.begin(), labels.begin() + b.k()));
}

}  // namespace

Rational PathTuple::coefficient(const DimensionFunction& ratios, const LetterWeights& weights) const {
  const Rational total = ratios.total();
  Rational c = 1;
  for (std::size_t l = 0; l < steps.size(); ++l) {
    if (types[l] == ElementaryType::Tau) c = -c;
    if (letters[l] < static_cast<int>(weights.size())) c *= weights[letters[l]];
    for (int cls = 0; cls < ratios.class_count(); ++cls) c *= pow(ratios.class_dim(cls) / total, exponents[l][cls]);
  }
  return c;
}

namespace {

void extend(const PathTuple& prefix, const Word& w, int remaining, const DimensionFunction& ratios, FieldClass fc,
            const std::optional<SetPartition>& beta, std::vector<PathTuple>& out) {
  if (remaining == 0) {
    if (!beta || slot_cycles(prefix.endpoint.pairing) == *beta) out.push_back(prefix);
    return;
  }
  for (const auto& t : elementary_terms(prefix.endpoint, w, ratios, fc, true)) {
    PathTuple next = prefix;
    next.steps.push_back(t.step);
    next.exponents.push_back(t.exponent);
    next.types.push_back(t.type);
    next.letters.push_back(t.letter);
    const auto comp = compose(t.step.diagram, prefix.endpoint, ratios);
    next.endpoint = t.target;
    if (comp)
      for (const auto& [cls, count] : comp->loops) next.loops[cls] += count;
    extend(next, w, remaining - 1, ratios, fc, beta, out);
  }
}

}  // namespace

std::vector<PathTuple> enumerate_paths(const ColouredDiagram& b, const Word& w, int s, const DimensionFunction& ratios,
                                       FieldClass fc, const std::optional<SetPartition>& beta) {
  if (s < 0) throw std::invalid_argument("path length must be nonnegative");
  if (static_cast<int>(w.size()) != b.k()) throw std::invalid_argument("word length differs from diagram size");
  std::vector<PathTuple> out;
  PathTuple seed;
  seed.endpoint = b;
  extend(seed, w, s, ratios, fc, beta, out);
  return out;
}

BasisIndex cumulant_seed(const std::vector<int>& i, const std::vector<int>& j, const std::vector<bool>& star,
                         const std::vector<int>& letters, FieldClass fc) {
  if (i.size() != j.size() || i.size() != star.size() || i.size() != letters.size() || i.empty())
    throw std::invalid_argument("colour tuple, star pattern and letters must have the same nonzero length");
  OWord u;
  for (std::size_t m = 0; m < i.size(); ++m) u.push_back({i[m], j[m], star[m]});
  auto [b, w] = encode_word(u);
  for (std::size_t m = 0; m < w.size(); ++m) {
    w[m].letter = letters[m];
    if (fc == FieldClass::RealLike) w[m].bar = false;
  }
  return {b, w};
}

MomentFunction limit_cumulant_coefficient(const NonCrossingPartition& beta, const BasisIndex& seed,
                                          const DimensionFunction& ratios, FieldClass fc,
                                          const LetterWeights& weights) {
  const int k = seed.diagram.k();
  if (beta.size() != k) throw std::invalid_argument("partition size differs from diagram size");
  if (!seed.diagram.is_admissible(ratios)) return {};
  const SetPartition target = kreweras_complement(beta).underlying();
  const auto basis = reachable_basis(seed, ratios, fc, true);
  const auto L = build_generator_limit(basis, seed.word, ratios, fc, weights);
  std::vector<Rational> v(basis.size(), Rational(0));
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i].is_diagonal() && slot_cycles(basis[i].pairing) == target) v[i] = 1;
  return exact_exponential(L, v, 0);
}

// ---------------------------------------------------------- Monte-Carlo

std::vector<AmalgamatedEstimate> estimate_amalgamated(const std::vector<AmalgamatedArgument>& args,
                                                      const McConfig& cfg_in) {
  if (args.empty()) throw std::invalid_argument("no arguments");
  McConfig cfg = cfg_in;
  const int n = static_cast<int>(cfg.dims.size());
  int processes = cfg.processes;
  for (const auto& a : args) {
    if (a.process < 0) throw std::invalid_argument("negative process index");
    if (a.row < -1 || a.row >= n || a.col < -1 || a.col >= n) throw std::invalid_argument("compression colour out of range");
    processes = std::max(processes, a.process + 1);
  }
  cfg.processes = processes;
  const int k = static_cast<int>(args.size());
  const auto partitions = enumerate_nc(k);
  const std::size_t per_time = partitions.size() * 2 * static_cast<std::size_t>(n);
  std::vector<std::vector<double>> mu(partitions.size(), std::vector<double>(partitions.size(), 0.0));
  for (std::size_t g = 0; g < partitions.size(); ++g)
    for (std::size_t p = 0; p < partitions.size(); ++p)
      if (partitions[g].leq(partitions[p])) mu[g][p] = to_double(mobius_nc(partitions[g], partitions[p]));
  auto raw = monte_carlo(cfg, per_time, [&](const std::vector<std::vector<BlockMatrix>>& paths) {
    std::vector<double> out;
    for (std::size_t q = 0; q < cfg.times.size(); ++q) {
      std::vector<BlockMatrix> mats;
      for (const auto& a : args) {
        const BlockMatrix& u = paths[a.process][q];
        BlockMatrix m = a.star ? BlockMatrix(adjoint(u.entries), u.dims) : u;
        if (a.row >= 0 || a.col >= 0) {
          DiagonalElement left = DiagonalElement::zero(n), right = DiagonalElement::zero(n);
          for (int c = 0; c < n; ++c) {
            left.values[c] = (a.row < 0 || a.row == c) ? 1.0 : 0.0;
            right.values[c] = (a.col < 0 || a.col == c) ? 1.0 : 0.0;
          }
          m = right_multiply(left_multiply(left, m), right);
        }
        mats.push_back(std::move(m));
      }
      std::vector<DiagonalElement> e;
      for (const auto& pi : partitions) e.push_back(e_pi(pi, mats));
      for (std::size_t p = 0; p < partitions.size(); ++p) {
        DiagonalElement c = DiagonalElement::zero(n);
        for (std::size_t g = 0; g < partitions.size(); ++g)
          if (mu[g][p] != 0) c = c + e[g] * mu[g][p];
        for (int col = 0; col < n; ++col) out.push_back(e[p].values[col].real());
        for (int col = 0; col < n; ++col) out.push_back(c.values[col].real());
      }
    }
    return out;
  });
  std::vector<AmalgamatedEstimate> result;
  for (std::size_t q = 0; q < cfg.times.size(); ++q)
    for (std::size_t p = 0; p < partitions.size(); ++p) {
      AmalgamatedEstimate est{partitions[p], cfg.times[q], {}, {}};
      const std::size_t base = q * per_time + p * 2 * static_cast<std::size_t>(n);
      for (int col = 0; col < n; ++col) est.e_pi.push_back(raw[base + col]);
      for (int col = 0; col < n; ++col) est.c_pi.push_back(raw[base + n + col]);
      result.push_back(std::move(est));
    }
  return result;
}

}  // namespace mfe
