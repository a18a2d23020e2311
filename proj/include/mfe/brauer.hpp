// Coloured Brauer diagrams: composition with loop extraction, twists,
// orientations, elementary diagrams and the loop-variable extension.
//
// A diagram of size k acts on the points 0..k-1 (bottom row, unprimed) and
// k..2k-1 (top row, primed: point k+i is i'). Colours are 0-based.
#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfe/ncpart.hpp"
#include "mfe/rational.hpp"

namespace mfe {

// A fixed-point-free involution of {0..2k-1}.
class Pairing {
 public:
  Pairing() = default;
  // Throws std::invalid_argument unless match is a fixed-point-free involution
  // on an even number of points.
  explicit Pairing(std::vector<int> match);
  static Pairing identity(int k);
  // tau_{ab}: pairs {a, b'} and {b, a'}, verticals elsewhere.
  static Pairing tau(int k, int a, int b);
  // e_{ab}: pairs {a, b} and {a', b'}, verticals elsewhere.
  static Pairing projector(int k, int a, int b);
  // Permutation diagram: pairs {sigma(i), i'}.
  static Pairing from_permutation(const Permutation& sigma);
  static Pairing from_pairs(int k, const std::vector<std::pair<int, int>>& pairs);

  int k() const { return static_cast<int>(match_.size()) / 2; }
  int partner(int x) const { return match_.at(x); }
  const std::vector<int>& match() const { return match_; }
  // Pairs (x, y) with x < y, sorted by x.
  std::vector<std::pair<int, int>> pairs() const;
  SetPartition as_partition() const;

  auto operator<=>(const Pairing&) const = default;
  bool operator==(const Pairing&) const = default;

 private:
  std::vector<int> match_;
};

// Strictly positive dimensions (finite d) or ratios (limit) per colour.
class DimensionFunction {
 public:
  DimensionFunction() = default;
  explicit DimensionFunction(std::vector<Rational> dims);
  static DimensionFunction uniform(int n, const Rational& d);

  int colours() const { return static_cast<int>(dims_.size()); }
  const Rational& dim(int colour) const { return dims_.at(colour); }
  const std::vector<Rational>& dims() const { return dims_; }
  // Kernel block of a colour: colours with equal dimension share a class.
  // Classes are numbered by first appearance.
  int class_of(int colour) const { return class_.at(colour); }
  int class_count() const { return classes_; }
  Rational class_dim(int cls) const;
  Rational total() const;

 private:
  std::vector<Rational> dims_;
  std::vector<int> class_;
  int classes_ = 0;
};

struct ColouredDiagram {
  Pairing pairing;
  std::vector<int> colour;  // size 2k

  int k() const { return pairing.k(); }
  // Single colour per pair and colour indices within range.
  bool is_valid(const DimensionFunction& df) const;
  // Every pair joins colours of the same kernel class.
  bool is_admissible(const DimensionFunction& df) const;
  // c(i) = c(i') for every i.
  bool is_diagonal() const;

  auto operator<=>(const ColouredDiagram&) const = default;
  bool operator==(const ColouredDiagram&) const = default;
};

ColouredDiagram uncoloured(const Pairing& p);  // every point coloured 0

using Orientation = std::vector<int>;  // size k, entries +1 / -1

// Removed closed components per kernel class.
using LoopCounts = std::map<int, int>;

struct ExtendedDiagram {
  ColouredDiagram diagram;
  LoopCounts loops;
  // Empty means the canonical orientation of diagram.pairing.
  Orientation orientation;

  int total_loops() const;
  auto operator<=>(const ExtendedDiagram&) const = default;
  bool operator==(const ExtendedDiagram&) const = default;
};

// Stacks b1 over b2 (the unprimed row of b1 is glued to the primed row of
// b2). Returns std::nullopt (the zero element) when a fused link joins
// colours of different kernel classes.
std::optional<ExtendedDiagram> compose(const ColouredDiagram& b1, const ColouredDiagram& b2,
                                       const DimensionFunction& df);
// Uncoloured composition: (b1 ∘ b2, number of removed loops).
std::pair<Pairing, int> compose(const Pairing& b1, const Pairing& b2);

// Specializes every loop variable to its dimension.
std::pair<ColouredDiagram, Rational> project_loops(const ExtendedDiagram& x,
                                                   const DimensionFunction& df);

SetPartition cycle_partition(const Pairing& b);
int cycle_count(const Pairing& b);

Pairing twist(const Pairing& b, int i);
ColouredDiagram twist(const ColouredDiagram& b, int i);
ColouredDiagram transpose_diagram(const ColouredDiagram& b);
Pairing transpose_diagram(const Pairing& b);
// The point map x <-> x* applied to an arbitrary partition of 2k points.
SetPartition twist_partition(const SetPartition& p, int k, int i);

Orientation canonical_orientation(const Pairing& b);
bool is_valid_orientation(const Pairing& b, const Orientation& s);
// Cycles of the permutation are the traces of the oriented loops on {0..k-1}.
Permutation sigma_of(const Pairing& b, const Orientation& s);

// One oriented loop: the visited slots with their signs, starting at the
// smallest slot.
struct OrientedLoop {
  std::vector<int> slots;
  std::vector<int> signs;
};
std::vector<OrientedLoop> oriented_loops(const Pairing& b, const Orientation& s);

// r ∘ b with the orientation inherited from s at the minimum of each new cycle.
// Loops of b (if any) are carried over. Returns std::nullopt for a zero product.
std::optional<ExtendedDiagram> diamond(const ColouredDiagram& r, const ExtendedDiagram& bs,
                                       const DimensionFunction& df);

enum class ElementaryType { Tau, Projector };

struct Elementary {
  ElementaryType type;
  int a;
  int b;  // a < b
  Pairing pairing(int k) const;
};

// nc(b ∨ r) = nc(b ∨ 1) + 1, where ∨ is the join of partitions of the 2k points.
bool creates_cycle(const Elementary& r, const Pairing& b);
// Sign rule; std::nullopt when a and b lie in different cycles of b.
std::optional<bool> creates_cycle_by_sign(const Elementary& r, const Pairing& b);

enum class ElementaryKind { NonMixing, TPlus, WPlus, Exclusive, Diagonal };

// An elementary coloured diagram r whose bottom colours equal the top colours
// of the diagram it multiplies.
struct ColouredElementary {
  Elementary shape;
  ColouredDiagram diagram;
  // Colour of the new top pair {a', b'} for projectors, -1 for transpositions.
  int top_colour = -1;
};

// Elementary coloured diagrams acting on b, filtered by kind:
//   NonMixing: every transposition and every single-colour projector;
//   TPlus / WPlus: the cycle- or loop-creating transpositions / projectors;
//   Diagonal / Exclusive: non-mixing elements whose slots a, b carry equal /
//   different colours on the top row of b.
std::vector<ColouredElementary> elementary_sets(const ColouredDiagram& b, ElementaryKind kind,
                                                const DimensionFunction& df);

// Loop count of the class plus the cycles normalized in that class. A cycle is
// normalized at its smallest slot m if s(m) = +1 and at m' otherwise.
int fnc(const ExtendedDiagram& x, int cls, const DimensionFunction& df);

// Complex alphabet letter.
struct WordLetter {
  int letter = 0;
  bool bar = false;
  auto operator<=>(const WordLetter&) const = default;
  bool operator==(const WordLetter&) const = default;
};
using Word = std::vector<WordLetter>;

Word plain_word(const std::vector<int>& letters);
Word strip_bars(const Word& w);
std::string word_to_string(const Word& w);

// A generator u_{ij} or u*_{ij} of the dual Voiculescu group (0-based i, j).
struct OLetter {
  int i = 0;
  int j = 0;
  bool star = false;
  auto operator<=>(const OLetter&) const = default;
  bool operator==(const OLetter&) const = default;
};
using OWord = std::vector<OLetter>;

// Tokens "u<i><j>" (single digits) or "u[i,j]", each optionally followed by
// '*'. Indices are 1-based in the text. Throws std::invalid_argument.
OWord parse_oword(std::string_view text);
std::string oword_to_string(const OWord& u);

// Twists the cycle diagram c_p at the starred positions and colours bottom i /
// top j (swapped at starred positions). The word carries a bar on starred slots.
std::pair<ColouredDiagram, Word> encode_word(const OWord& u);

// All colourings of p with one colour per pair that are admissible for df.
std::vector<ColouredDiagram> expand_uncoloured(const Pairing& p, const DimensionFunction& df);

// Text form "(1,2')@1 (2,1')@1": one token per pair, 1-based points and
// colours. Mixed pairs print "@c1,c2".
std::string to_text(const ColouredDiagram& b);
ColouredDiagram parse_diagram(std::string_view text);

}  // namespace mfe
