// Set partitions, non-crossing partitions, Möbius function and permutations.
//
// Points are 0-based internally. Text output uses 1-based labels.
#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "mfe/rational.hpp"

namespace mfe {

// A partition of {0..size-1}, stored as a canonical block label per point:
// blocks are numbered 0,1,2,... in order of their minimum element.
class SetPartition {
 public:
  SetPartition() = default;
  // Builds from explicit blocks; throws std::invalid_argument unless the
  // blocks are nonempty, disjoint and cover {0..ground_size-1}.
  SetPartition(int ground_size, const std::vector<std::vector<int>>& blocks);
  // Builds from an arbitrary labelling (points with equal labels share a block).
  static SetPartition from_labels(const std::vector<int>& labels);
  static SetPartition singletons(int ground_size);  // 0_k
  static SetPartition one_block(int ground_size);   // 1_k

  int size() const { return static_cast<int>(label_.size()); }
  int block_count() const { return blocks_; }
  int block_of(int point) const { return label_.at(point); }
  const std::vector<int>& labels() const { return label_; }
  // Blocks sorted by minimum, elements ascending.
  std::vector<std::vector<int>> blocks() const;

  // True iff every block of *this is contained in a block of other.
  bool refines(const SetPartition& other) const;
  bool is_noncrossing() const;

  std::string to_string() const;  // "{{1,2},{3}}"

  auto operator<=>(const SetPartition&) const = default;
  bool operator==(const SetPartition&) const = default;

 private:
  std::vector<int> label_;
  int blocks_ = 0;
};

SetPartition partition_join(const SetPartition& p, const SetPartition& q);
SetPartition partition_meet(const SetPartition& p, const SetPartition& q);

// A partition of {0..k-1} without crossings.
class NonCrossingPartition {
 public:
  NonCrossingPartition() = default;
  // Throws std::invalid_argument if p has a crossing.
  explicit NonCrossingPartition(SetPartition p);
  NonCrossingPartition(int k, const std::vector<std::vector<int>>& blocks)
      : NonCrossingPartition(SetPartition(k, blocks)) {}

  const SetPartition& underlying() const { return p_; }
  int size() const { return p_.size(); }
  int block_count() const { return p_.block_count(); }
  std::vector<std::vector<int>> blocks() const { return p_.blocks(); }
  // Reversed refinement order: *this <= other iff *this refines other.
  bool leq(const NonCrossingPartition& other) const { return p_.refines(other.p_); }
  std::string to_string() const { return p_.to_string(); }

  auto operator<=>(const NonCrossingPartition&) const = default;
  bool operator==(const NonCrossingPartition&) const = default;

 private:
  SetPartition p_;
};

constexpr int kDefaultEnumerationBound = 12;

// All non-crossing partitions of {0..k-1}, in a deterministic order.
std::vector<NonCrossingPartition> enumerate_nc(int k, int bound = kDefaultEnumerationBound);
// All set partitions of {0..k-1} (restricted growth strings).
std::vector<SetPartition> enumerate_set_partitions(int k, int bound = 10);

// Möbius function of the lattice NC(k) on the interval [pi, rho].
Rational mobius_nc(const NonCrossingPartition& pi, const NonCrossingPartition& rho);

class Permutation {
 public:
  Permutation() = default;
  // images[i] = sigma(i); throws unless a bijection of {0..k-1}.
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int k);
  static Permutation transposition(int k, int a, int b);
  // The cycle (0 1 ... k-1).
  static Permutation full_cycle(int k);
  static Permutation from_cycles(int k, const std::vector<std::vector<int>>& cycles);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_.at(i); }
  const std::vector<int>& images() const { return images_; }
  Permutation inverse() const;
  // (*this * other)(i) = (*this)(other(i)).
  Permutation operator*(const Permutation& other) const;
  std::vector<std::vector<int>> cycles() const;  // each starting at its minimum
  int cycle_count() const;
  SetPartition cycle_partition() const;
  // Cycle type as a sorted list of cycle lengths (descending).
  std::vector<int> cycle_type() const;
  std::string to_string() const;  // "(1 2 3)(4)"

  auto operator<=>(const Permutation&) const = default;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> images_;
};

Permutation nc_to_permutation(const NonCrossingPartition& pi);
int geodesic_distance(const Permutation& sigma);
Integer count_minimal_factorizations(const Permutation& sigma);

// Kreweras complement K(pi) inside NC(k): the partition into cycles of
// sigma_pi^{-1} * (0 1 ... k-1).
NonCrossingPartition kreweras_complement(const NonCrossingPartition& pi);

}  // namespace mfe
