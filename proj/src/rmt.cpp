#include "mfe/rmt.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <mutex>
#include <thread>

namespace mfe {

// ------------------------------------------------------------- Lie algebra

namespace {

Eigen::MatrixXd unit(int N, int a, int b) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  m(a, b) = 1;
  return m;
}

QuatMatrix quat_unit_times(int N, const Eigen::MatrixXd& m, int component) {
  QuatMatrix q(N, N);
  (component == 0 ? q.a : component == 1 ? q.b : component == 2 ? q.c : q.d) = m;
  return q;
}

}  // namespace

LieBasis lie_basis(int N, Field field) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  LieBasis basis{N, field, {}};
  const double n = N;
  for (int a = 0; a < N; ++a) {
    for (int b = a + 1; b < N; ++b) {
      const Eigen::MatrixXd anti = unit(N, a, b) - unit(N, b, a);
      const Eigen::MatrixXd sym = unit(N, a, b) + unit(N, b, a);
      switch (field) {
        case Field::R: basis.elements.emplace_back(Eigen::MatrixXd(anti / std::sqrt(n))); break;
        case Field::C:
          basis.elements.emplace_back(Eigen::MatrixXcd(anti.cast<Complex>() / std::sqrt(2 * n)));
          basis.elements.emplace_back(Eigen::MatrixXcd(sym.cast<Complex>() * Complex(0, 1) / std::sqrt(2 * n)));
          break;
        case Field::H:
          basis.elements.emplace_back(quat_unit_times(N, anti / (2 * std::sqrt(n)), 0));
          for (int u = 1; u <= 3; ++u) basis.elements.emplace_back(quat_unit_times(N, sym / (2 * std::sqrt(n)), u));
          break;
      }
    }
  }
  for (int a = 0; a < N; ++a) {
    const Eigen::MatrixXd e = unit(N, a, a);
    if (field == Field::C) basis.elements.emplace_back(Eigen::MatrixXcd(e.cast<Complex>() * Complex(0, 1) / std::sqrt(n)));
    if (field == Field::H)
      for (int u = 1; u <= 3; ++u) basis.elements.emplace_back(quat_unit_times(N, e / std::sqrt(2 * n), u));
  }
  return basis;
}

double lie_inner(const FieldMatrix& x, const FieldMatrix& y, int N) {
  return beta(field_of(x)) * N / 2.0 * field_trace(multiply(adjoint(x), y)).real();
}

double gram_defect(const LieBasis& basis) {
  double worst = 0;
  for (std::size_t a = 0; a < basis.elements.size(); ++a)
    for (std::size_t b = a; b < basis.elements.size(); ++b) {
      const double v = lie_inner(basis.elements[a], basis.elements[b], basis.N);
      worst = std::max(worst, std::abs(v - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

Rational casimir_constant(Field field, int N) {
  const int b = beta(field);
  return Rational(-1) + ratio(2 - b, static_cast<long>(b) * N);
}

double casimir_scalar_check(const LieBasis& basis) {
  FieldMatrix sum = zero_matrix(basis.field, basis.N, basis.N);
  for (const auto& h : basis.elements) sum = add(sum, multiply(h, h));
  const FieldMatrix target = scale(identity_matrix(basis.field, basis.N), to_double(casimir_constant(basis.field, basis.N)));
  return max_abs_diff(sum, target);
}

// ----------------------------------------------------------------- sampler

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

// Working representation: real for R, complex for C, 2N complex for H.
struct Walker {
  int N;
  Field field;
  Eigen::MatrixXd ur;
  Eigen::MatrixXcd uc;

  Walker(int n, Field f) : N(n), field(f) {
    if (f == Field::R) ur = Eigen::MatrixXd::Identity(N, N);
    else uc = Eigen::MatrixXcd::Identity(f == Field::H ? 2 * N : N, f == Field::H ? 2 * N : N);
  }

  void step(double dt, std::mt19937_64& rng, std::normal_distribution<double>& g) {
    const double n = N;
    const double s = std::sqrt(dt);
    switch (field) {
      case Field::R: {
        Eigen::MatrixXd x = Eigen::MatrixXd::Zero(N, N);
        const double c = s / std::sqrt(n);
        for (int a = 0; a < N; ++a)
          for (int b = a + 1; b < N; ++b) {
            x(a, b) = c * g(rng);
            x(b, a) = -x(a, b);
          }
        ur = ur * x.exp();
        break;
      }
      case Field::C: {
        Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(N, N);
        const double off = s / std::sqrt(2 * n), diag = s / std::sqrt(n);
        for (int a = 0; a < N; ++a) {
          x(a, a) = Complex(0, diag * g(rng));
          for (int b = a + 1; b < N; ++b) {
            const double g1 = g(rng), g2 = g(rng);
            x(a, b) = Complex(off * g1, off * g2);
            x(b, a) = -std::conj(x(a, b));
          }
        }
        uc = uc * x.exp();
        break;
      }
      case Field::H: {
        // q = z + w j with z = q0 + q1 i, w = q2 + q3 i.
        Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(N, N), w = Eigen::MatrixXcd::Zero(N, N);
        const double off = s / (2 * std::sqrt(n)), diag = s / std::sqrt(2 * n);
        for (int a = 0; a < N; ++a) {
          const double q1 = g(rng), q2 = g(rng), q3 = g(rng);
          z(a, a) = Complex(0, diag * q1);
          w(a, a) = Complex(diag * q2, diag * q3);
          for (int b = a + 1; b < N; ++b) {
            const double p0 = g(rng), p1 = g(rng), p2 = g(rng), p3 = g(rng);
            z(a, b) = Complex(off * p0, off * p1);
            w(a, b) = Complex(off * p2, off * p3);
            // X_ba = -conj(X_ab): conj(z + w j) = conj(z) - w j.
            z(b, a) = -std::conj(z(a, b));
            w(b, a) = w(a, b);
          }
        }
        Eigen::MatrixXcd x(2 * N, 2 * N);
        x << z, w, -w.conjugate(), z.conjugate();
        uc = uc * x.exp();
        break;
      }
    }
  }

  FieldMatrix value() const {
    switch (field) {
      case Field::R: return ur;
      case Field::C: return uc;
      case Field::H: return QuatMatrix::from_complex(uc);
    }
    return ur;
  }
};

}  // namespace

SamplePath sample_bm(int N, Field field, double t, int steps, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (!(t >= 0)) throw std::invalid_argument("time must be nonnegative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Walker walker(N, field);
  if (t > 0)
    for (int i = 0; i < steps; ++i) walker.step(t / steps, rng, g);
  return {N, field, t, steps, seed, walker.value()};
}

std::vector<FieldMatrix> sample_bm_path(int N, Field field, const std::vector<double>& times, int steps_per_unit,
                                        std::mt19937_64& rng) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  if (steps_per_unit < 1) throw std::invalid_argument("steps must be positive");
  std::normal_distribution<double> g;
  Walker walker(N, field);
  std::vector<FieldMatrix> out;
  double now = 0;
  for (double t : times) {
    if (!(t >= now)) throw std::invalid_argument("times must be nonnegative and nondecreasing");
    if (t > now) {
      const int steps = std::max(1, static_cast<int>(std::ceil((t - now) * steps_per_unit - 1e-9)));
      for (int i = 0; i < steps; ++i) walker.step((t - now) / steps, rng, g);
    }
    now = t;
    out.push_back(walker.value());
  }
  return out;
}

// -------------------------------------------------------------- block maps

std::map<std::pair<int, int>, FieldMatrix> extract_blocks(const BlockMatrix& a) {
  std::map<std::pair<int, int>, FieldMatrix> out;
  const int n = static_cast<int>(a.dims.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.emplace(std::make_pair(i, j), a.block(i, j));
  return out;
}

namespace {

template <class M>
void place(M& dst, const M& src, Eigen::Index r0, Eigen::Index c0) {
  dst.block(r0, c0, src.rows(), src.cols()) = src;
}

FieldMatrix permute(const FieldMatrix& m, const std::vector<int>& idx) {
  const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
  auto perm = [&](const auto& x) {
    using M = std::decay_t<decltype(x)>;
    M y(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) y(r, c) = x(idx[r], idx[c]);
    return y;
  };
  if (const auto* r = std::get_if<Eigen::MatrixXd>(&m)) return perm(*r);
  if (const auto* c = std::get_if<Eigen::MatrixXcd>(&m)) return perm(*c);
  const auto& q = std::get<QuatMatrix>(m);
  QuatMatrix y;
  y.a = perm(q.a);
  y.b = perm(q.b);
  y.c = perm(q.c);
  y.d = perm(q.d);
  return y;
}

}  // namespace

BlockMatrix assemble_blocks(const std::map<std::pair<int, int>, FieldMatrix>& blocks, const std::vector<int>& dims) {
  if (blocks.empty()) throw std::invalid_argument("no blocks");
  int total = 0;
  for (int d : dims) total += d;
  const Field f = field_of(blocks.begin()->second);
  FieldMatrix out = zero_matrix(f, total, total);
  const int n = static_cast<int>(dims.size());
  std::vector<int> off(n + 1, 0);
  for (int i = 0; i < n; ++i) off[i + 1] = off[i] + dims[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto it = blocks.find({i, j});
      if (it == blocks.end()) throw std::invalid_argument("missing block");
      const auto& b = it->second;
      if (rows(b) != dims[i] || cols(b) != dims[j]) throw std::invalid_argument("block shape inconsistent with dims");
      std::visit(
          [&](auto& dst) {
            using M = std::decay_t<decltype(dst)>;
            const auto& src = std::get<M>(b);
            if constexpr (std::is_same_v<M, QuatMatrix>) {
              place(dst.a, src.a, off[i], off[j]);
              place(dst.b, src.b, off[i], off[j]);
              place(dst.c, src.c, off[i], off[j]);
              place(dst.d, src.d, off[i], off[j]);
            } else {
              place(dst, src, off[i], off[j]);
            }
          },
          out);
    }
  return BlockMatrix(std::move(out), dims);
}

BlockMatrix cluster_map(const BlockMatrix& a, const SetPartition& pi) {
  if (pi.size() != static_cast<int>(a.dims.size())) throw std::invalid_argument("partition size differs from colour count");
  std::vector<int> idx, new_dims;
  for (const auto& block : pi.blocks()) {
    const int d = a.dims[block.front()];
    for (int c : block) {
      if (a.dims[c] != d) throw std::invalid_argument("dims differ inside a block of the partition");
      for (int r = 0; r < d; ++r) idx.push_back(a.offset(c) + r);
    }
    new_dims.push_back(d * static_cast<int>(block.size()));
  }
  return BlockMatrix(permute(a.entries, idx), new_dims);
}

// ------------------------------------------------------------- Monte-Carlo

void Welford::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Welford::merge(const Welford& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double n = static_cast<double>(n_ + o.n_);
  const double delta = o.mean_ - mean_;
  mean_ += delta * static_cast<double>(o.n_) / n;
  m2_ += o.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
  n_ += o.n_;
}

Estimate Welford::estimate() const {
  Estimate e;
  e.samples = n_;
  e.mean = mean_;
  e.stderr_ = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
  return e;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MFE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Estimate> monte_carlo(const McConfig& cfg, std::size_t stats, const SampleStatistic& f) {
  if (cfg.samples == 0) throw std::invalid_argument("zero samples");
  if (cfg.processes < 1) throw std::invalid_argument("at least one process is required");
  if (cfg.times.empty()) throw std::invalid_argument("no observation times");
  int N = 0;
  for (int d : cfg.dims) {
    if (d <= 0) throw std::invalid_argument("dims must be positive");
    N += d;
  }
  if (N == 0) throw std::invalid_argument("empty dims");
  const std::size_t values = stats * cfg.times.size();
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (cfg.samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Welford>> acc(chunks, std::vector<Welford>(values));
  std::vector<std::string> dumps(cfg.dump ? chunks : 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) {
        std::ostringstream os;
        os.precision(17);
        const std::size_t end = std::min(cfg.samples, (c + 1) * kChunk);
        for (std::size_t s = c * kChunk; s < end; ++s) {
          const std::uint64_t seed = substream_seed(cfg.seed, s);
          std::mt19937_64 rng(seed);
          std::vector<std::vector<BlockMatrix>> paths;
          for (int p = 0; p < cfg.processes; ++p) {
            std::vector<BlockMatrix> path;
            for (auto& m : sample_bm_path(N, cfg.field, cfg.times, cfg.steps_per_unit, rng))
              path.emplace_back(std::move(m), cfg.dims);
            paths.push_back(std::move(path));
          }
          const auto v = f(paths);
          if (v.size() != values) throw std::logic_error("statistic returned the wrong number of values");
          for (std::size_t i = 0; i < values; ++i) {
            acc[c][i].add(v[i]);
            if (cfg.dump) os << seed << ',' << cfg.times[i / stats] << ',' << i % stats << ',' << v[i] << '\n';
          }
        }
        if (cfg.dump) dumps[c] = os.str();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = chunks;
    }
  };

  const int threads = std::min<int>(thread_count(cfg.threads), static_cast<int>(chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<Welford> total(values);
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t i = 0; i < values; ++i) total[i].merge(acc[c][i]);
  if (cfg.dump) {
    *cfg.dump << "seed,t,statistic,value\n";
    for (const auto& d : dumps) *cfg.dump << d;
  }
  std::vector<Estimate> out;
  for (const auto& w : total) out.push_back(w.estimate());
  return out;
}

namespace {

BlockMatrix conjugate(const BlockMatrix& a) {
  return BlockMatrix(FieldMatrix(std::get<Eigen::MatrixXcd>(a.entries).conjugate().eval()), a.dims);
}

}  // namespace

std::vector<Estimate> estimate_stat(const ColouredDiagram& b, const Word& w, const McConfig& cfg_in) {
  if (static_cast<int>(w.size()) != b.k()) throw std::invalid_argument("word length differs from diagram size");
  McConfig cfg = cfg_in;
  int letters = 1;
  for (const auto& l : w) letters = std::max(letters, l.letter + 1);
  cfg.processes = letters;
  const bool conj = cfg.field == Field::C;
  return monte_carlo(cfg, 1, [&](const std::vector<std::vector<BlockMatrix>>& paths) {
    std::vector<double> out;
    for (std::size_t q = 0; q < cfg.times.size(); ++q) {
      std::vector<BlockMatrix> mats;
      for (const auto& l : w) {
        const auto& m = paths[l.letter][q];
        mats.push_back(conj && l.bar ? conjugate(m) : m);
      }
      out.push_back(m_stat(b, mats).real());
    }
    return out;
  });
}

WordEvaluator::WordEvaluator(std::vector<OWord> words, Field field, std::vector<int> dims)
    : words_(std::move(words)), field_(field), dims_(std::move(dims)) {
  const int n = static_cast<int>(dims_.size());
  const auto df = dimension_function(dims_);
  for (const auto& u : words_) {
    if (u.empty()) throw std::invalid_argument("empty word");
    for (const auto& l : u)
      if (l.i >= n || l.j >= n) throw std::invalid_argument("word index exceeds the number of blocks");
    for (std::size_t m = 0; m < u.size(); ++m)
      if (dims_[u[m].j] != dims_[u[(m + 1) % u.size()].i])
        throw std::invalid_argument("block word is not conformable: " + oword_to_string(u));
    const auto [b, w] = encode_word(u);
    const ExtendedDiagram x{b, {}, {}};
    double denom = 1;
    for (int cls = 0; cls < df.class_count(); ++cls)
      denom *= std::pow(to_double(df.class_dim(cls)), fnc(x, cls, df));
    scale_.push_back(1.0 / denom);
  }
}

std::vector<double> WordEvaluator::operator()(const BlockMatrix& u) const {
  const int n = static_cast<int>(dims_.size());
  // Letter matrices in the complex representation: index (i * n + j) for
  // U_ij and n² + (i * n + j) for (U*)_ij.
  std::vector<Eigen::MatrixXcd> letters(static_cast<std::size_t>(2 * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const FieldMatrix blk = u.block(i, j);
      Eigen::MatrixXcd c;
      if (const auto* r = std::get_if<Eigen::MatrixXd>(&blk)) c = r->cast<Complex>();
      else if (const auto* z = std::get_if<Eigen::MatrixXcd>(&blk)) c = *z;
      else c = std::get<QuatMatrix>(blk).to_complex();
      letters[static_cast<std::size_t>(j * n + i + n * n)] = c.adjoint();
      letters[static_cast<std::size_t>(i * n + j)] = std::move(c);
    }
  auto index = [&](const OLetter& l) { return static_cast<std::size_t>((l.star ? n * n : 0) + l.i * n + l.j); };
  std::map<std::pair<std::size_t, std::size_t>, Eigen::MatrixXcd> pairs;
  const double trace_scale = field_ == Field::H ? 0.5 : 1.0;
  std::vector<double> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const auto& word = words_[w];
    const std::size_t k = word.size();
    Complex tr;
    if (k == 1) {
      tr = letters[index(word[0])].trace();
    } else {
      Eigen::MatrixXcd prefix;
      if (k == 2) {
        prefix = letters[index(word[0])];
      } else {
        const auto key = std::make_pair(index(word[0]), index(word[1]));
        auto it = pairs.find(key);
        if (it == pairs.end()) it = pairs.emplace(key, letters[key.first] * letters[key.second]).first;
        prefix = it->second;
        for (std::size_t m = 2; m + 1 < k; ++m) prefix = prefix * letters[index(word[m])];
      }
      tr = prefix.cwiseProduct(letters[index(word[k - 1])].transpose()).sum();
    }
    out.push_back(trace_scale * tr.real() * scale_[w]);
  }
  return out;
}

std::vector<Estimate> estimate_words(const std::vector<OWord>& words, const McConfig& cfg_in) {
  McConfig cfg = cfg_in;
  cfg.processes = 1;
  const WordEvaluator eval(words, cfg.field, cfg.dims);
  return monte_carlo(cfg, words.size(), [&](const std::vector<std::vector<BlockMatrix>>& paths) {
    std::vector<double> out;
    for (std::size_t q = 0; q < cfg.times.size(); ++q) {
      const auto v = eval(paths[0][q]);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  });
}

}  // namespace mfe
