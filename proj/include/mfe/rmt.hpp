// Brownian motion on U(N, K) for K = R, C, H: Lie algebra bases, the Casimir
// check, a geometric Euler sampler, block maps and Monte-Carlo estimates.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include "mfe/brauer.hpp"
#include "mfe/evaltrace.hpp"
#include "mfe/ncpart.hpp"
#include "mfe/rational.hpp"

namespace mfe {

// Orthonormal basis of the Lie algebra u(N, K) for <X,Y> = (βN/2) Re Tr(X* Y).
struct LieBasis {
  int N = 0;
  Field field = Field::C;
  std::vector<FieldMatrix> elements;
};

LieBasis lie_basis(int N, Field field);
double lie_inner(const FieldMatrix& x, const FieldMatrix& y, int N);
// max |<H_a, H_b> - δ_ab|.
double gram_defect(const LieBasis& basis);
// -1 + (2-β)/(βN).
Rational casimir_constant(Field field, int N);
// max-norm of Σ H_k² - casimir_constant · I.
double casimir_scalar_check(const LieBasis& basis);

// Seed of sample `index` derived from a base seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

struct SamplePath {
  int N = 0;
  Field field = Field::C;
  double t = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  FieldMatrix U;
};

constexpr int kDefaultStepsPerUnit = 200;

// Geometric Euler scheme U <- U exp(sqrt(δ) Σ g_k H_k) with δ = t/steps.
SamplePath sample_bm(int N, Field field, double t, int steps, std::uint64_t seed);
// One path observed at nondecreasing times; each interval uses
// ceil(Δt · steps_per_unit) steps.
std::vector<FieldMatrix> sample_bm_path(int N, Field field, const std::vector<double>& times, int steps_per_unit,
                                        std::mt19937_64& rng);

// The d_i x d_j blocks keyed by (row colour, column colour).
std::map<std::pair<int, int>, FieldMatrix> extract_blocks(const BlockMatrix& a);
BlockMatrix assemble_blocks(const std::map<std::pair<int, int>, FieldMatrix>& blocks, const std::vector<int>& dims);
// Reorders colours so that the colours of each block of pi are adjacent; the
// result has one colour per block of pi. Throws unless dims are constant on
// the blocks of pi.
BlockMatrix cluster_map(const BlockMatrix& a, const SetPartition& pi);

struct Estimate {
  double mean = 0;
  double stderr_ = 0;
  std::size_t samples = 0;
};

// Running mean and variance, mergeable.
class Welford {
 public:
  void add(double x);
  void merge(const Welford& o);
  Estimate estimate() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

struct McConfig {
  Field field = Field::C;
  std::vector<int> dims;      // block sizes; N is their sum
  std::vector<double> times;  // observation times, nondecreasing
  std::size_t samples = 10000;
  int steps_per_unit = kDefaultStepsPerUnit;
  std::uint64_t seed = 1;
  int processes = 1;          // independent Brownian motions per sample
  int threads = 0;            // 0: MFE_THREADS or hardware concurrency
  std::ostream* dump = nullptr;  // CSV rows "seed,t,statistic,value"
};

// paths[p][q] is process p at times[q]; returns one value per statistic and time,
// laid out as values[q * stats + s].
using SampleStatistic = std::function<std::vector<double>(const std::vector<std::vector<BlockMatrix>>& paths)>;

// Mean and standard error of every statistic at every time, layout as above.
std::vector<Estimate> monte_carlo(const McConfig& cfg, std::size_t stats, const SampleStatistic& f);

// Re m_stat of (b, w): letter l of w reads process l (conjugated when barred,
// over C). One estimate per time.
std::vector<Estimate> estimate_stat(const ColouredDiagram& b, const Word& w, const McConfig& cfg);
// Several word statistics from one set of paths; result[q * words + s].
std::vector<Estimate> estimate_words(const std::vector<OWord>& words, const McConfig& cfg);

// Evaluates Re of the normalized traces of block words on a sampled matrix,
// equal to Re m_stat of the encoded diagrams, through the complex
// representation of the blocks and cached products of letter pairs. Throws
// std::invalid_argument for words whose block shapes do not chain.
class WordEvaluator {
 public:
  WordEvaluator(std::vector<OWord> words, Field field, std::vector<int> dims);
  std::vector<double> operator()(const BlockMatrix& u) const;

 private:
  std::vector<OWord> words_;
  Field field_;
  std::vector<int> dims_;
  std::vector<double> scale_;
};

int thread_count(int requested);

}  // namespace mfe
