#include "mfe/brauer.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace mfe {

// ---------------------------------------------------------------- Pairing

Pairing::Pairing(std::vector<int> match) : match_(std::move(match)) {
  if (match_.size() % 2 != 0) throw std::invalid_argument("pairing needs an even number of points");
  const int n = static_cast<int>(match_.size());
  for (int x = 0; x < n; ++x) {
    const int y = match_[x];
    if (y < 0 || y >= n || y == x || match_[y] != x)
      throw std::invalid_argument("not a fixed-point-free involution");
  }
}

Pairing Pairing::identity(int k) {
  std::vector<int> m(static_cast<std::size_t>(2 * k));
  for (int i = 0; i < k; ++i) {
    m[i] = k + i;
    m[k + i] = i;
  }
  return Pairing(std::move(m));
}

Pairing Pairing::tau(int k, int a, int b) {
  if (a < 0 || b < 0 || a >= k || b >= k || a == b) throw std::invalid_argument("bad transposition slots");
  auto m = identity(k).match_;
  m[a] = k + b;
  m[k + b] = a;
  m[b] = k + a;
  m[k + a] = b;
  return Pairing(std::move(m));
}

Pairing Pairing::projector(int k, int a, int b) {
  if (a < 0 || b < 0 || a >= k || b >= k || a == b) throw std::invalid_argument("bad projector slots");
  auto m = identity(k).match_;
  m[a] = b;
  m[b] = a;
  m[k + a] = k + b;
  m[k + b] = k + a;
  return Pairing(std::move(m));
}

Pairing Pairing::from_permutation(const Permutation& sigma) {
  const int k = sigma.size();
  std::vector<int> m(static_cast<std::size_t>(2 * k));
  for (int i = 0; i < k; ++i) {
    m[sigma(i)] = k + i;
    m[k + i] = sigma(i);
  }
  return Pairing(std::move(m));
}

Pairing Pairing::from_pairs(int k, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> m(static_cast<std::size_t>(2 * k), -1);
  for (auto [x, y] : pairs) {
    if (x < 0 || y < 0 || x >= 2 * k || y >= 2 * k || m[x] != -1 || m[y] != -1)
      throw std::invalid_argument("bad pair list");
    m[x] = y;
    m[y] = x;
  }
  return Pairing(std::move(m));
}

std::vector<std::pair<int, int>> Pairing::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < static_cast<int>(match_.size()); ++x)
    if (x < match_[x]) out.emplace_back(x, match_[x]);
  return out;
}

SetPartition Pairing::as_partition() const {
  std::vector<int> lab(match_.size());
  for (int x = 0; x < static_cast<int>(match_.size()); ++x) lab[x] = std::min(x, match_[x]);
  return SetPartition::from_labels(lab);
}

// ------------------------------------------------------ DimensionFunction

DimensionFunction::DimensionFunction(std::vector<Rational> dims) : dims_(std::move(dims)) {
  class_.resize(dims_.size());
  for (std::size_t c = 0; c < dims_.size(); ++c) {
    if (dims_[c] <= 0) throw std::invalid_argument("dimensions must be strictly positive");
    int cls = -1;
    for (std::size_t e = 0; e < c; ++e)
      if (dims_[e] == dims_[c]) {
        cls = class_[e];
        break;
      }
    class_[c] = cls == -1 ? classes_++ : cls;
  }
}

DimensionFunction DimensionFunction::uniform(int n, const Rational& d) {
  return DimensionFunction(std::vector<Rational>(static_cast<std::size_t>(n), d));
}

Rational DimensionFunction::class_dim(int cls) const {
  for (std::size_t c = 0; c < dims_.size(); ++c)
    if (class_[c] == cls) return dims_[c];
  throw std::out_of_range("unknown kernel class");
}

Rational DimensionFunction::total() const {
  Rational s = 0;
  for (const auto& d : dims_) s += d;
  return s;
}

// -------------------------------------------------------- ColouredDiagram

bool ColouredDiagram::is_valid(const DimensionFunction& df) const {
  if (colour.size() != pairing.match().size()) return false;
  for (int c : colour)
    if (c < 0 || c >= df.colours()) return false;
  return is_admissible(df);
}

bool ColouredDiagram::is_admissible(const DimensionFunction& df) const {
  for (auto [x, y] : pairing.pairs())
    if (df.class_of(colour[x]) != df.class_of(colour[y])) return false;
  return true;
}

bool ColouredDiagram::is_diagonal() const {
  const int k = this->k();
  for (int i = 0; i < k; ++i)
    if (colour[i] != colour[k + i]) return false;
  return true;
}

ColouredDiagram uncoloured(const Pairing& p) {
  return ColouredDiagram{p, std::vector<int>(p.match().size(), 0)};
}

int ExtendedDiagram::total_loops() const {
  int s = 0;
  for (const auto& [cls, count] : loops) s += count;
  return s;
}

// ------------------------------------------------------------ composition

namespace {

struct Stacked {
  std::vector<int> match;                // result pairing on 2k points
  std::vector<std::vector<int>> loops;   // middle slots of each closed loop
};

// Node ids: bottom i -> i, middle i -> k+i, top i -> 2k+i.
Stacked stack(const std::vector<int>& top, const std::vector<int>& bottom) {
  const int k = static_cast<int>(top.size()) / 2;
  std::vector<int> adj_lower(static_cast<std::size_t>(3 * k), -1);  // edge from bottom diagram
  std::vector<int> adj_upper(static_cast<std::size_t>(3 * k), -1);  // edge from top diagram
  // Points of the lower diagram keep their ids; points of the upper one shift by k.
  for (int x = 0; x < 2 * k; ++x) adj_lower[x] = bottom[x];
  for (int x = 0; x < 2 * k; ++x) adj_upper[k + x] = k + top[x];

  Stacked out;
  out.match.assign(static_cast<std::size_t>(2 * k), -1);
  std::vector<char> seen(static_cast<std::size_t>(3 * k), 0);
  auto result_point = [k](int node) { return node < k ? node : node - k; };
  for (int start = 0; start < 3 * k; ++start) {
    if (start >= k && start < 2 * k) continue;  // only endpoints
    if (seen[start]) continue;
    int cur = start;
    bool use_lower = start < k;  // bottom endpoints only have a lower edge
    seen[cur] = 1;
    while (true) {
      const int nxt = use_lower ? adj_lower[cur] : adj_upper[cur];
      cur = nxt;
      seen[cur] = 1;
      if (cur < k || cur >= 2 * k) break;
      use_lower = !use_lower;
    }
    out.match[result_point(start)] = result_point(cur);
    out.match[result_point(cur)] = result_point(start);
  }
  for (int m = k; m < 2 * k; ++m) {
    if (seen[m]) continue;
    std::vector<int> loop;
    int cur = m;
    bool use_lower = true;
    while (!seen[cur]) {
      seen[cur] = 1;
      loop.push_back(cur - k);
      cur = use_lower ? adj_lower[cur] : adj_upper[cur];
      use_lower = !use_lower;
    }
    out.loops.push_back(std::move(loop));
  }
  return out;
}

}  // namespace

std::pair<Pairing, int> compose(const Pairing& b1, const Pairing& b2) {
  if (b1.k() != b2.k()) throw std::invalid_argument("compose: size mismatch");
  auto s = stack(b1.match(), b2.match());
  return {Pairing(std::move(s.match)), static_cast<int>(s.loops.size())};
}

std::optional<ExtendedDiagram> compose(const ColouredDiagram& b1, const ColouredDiagram& b2,
                                       const DimensionFunction& df) {
  if (b1.k() != b2.k()) throw std::invalid_argument("compose: size mismatch");
  if (!b1.is_valid(df) || !b2.is_valid(df)) throw std::invalid_argument("compose: diagram invalid under df");
  const int k = b1.k();
  for (int i = 0; i < k; ++i)
    if (df.class_of(b2.colour[k + i]) != df.class_of(b1.colour[i])) return std::nullopt;
  auto s = stack(b1.pairing.match(), b2.pairing.match());
  ExtendedDiagram out;
  out.diagram.pairing = Pairing(std::move(s.match));
  out.diagram.colour.resize(static_cast<std::size_t>(2 * k));
  for (int i = 0; i < k; ++i) {
    out.diagram.colour[i] = b2.colour[i];
    out.diagram.colour[k + i] = b1.colour[k + i];
  }
  for (const auto& loop : s.loops) ++out.loops[df.class_of(b1.colour[loop.front()])];
  return out;
}

std::pair<ColouredDiagram, Rational> project_loops(const ExtendedDiagram& x, const DimensionFunction& df) {
  Rational scalar = 1;
  for (const auto& [cls, count] : x.loops) {
    if (count < 0) throw std::invalid_argument("negative loop multiplicity");
    scalar *= pow(df.class_dim(cls), count);
  }
  return {x.diagram, scalar};
}

// ------------------------------------------------------------------ cycles

SetPartition cycle_partition(const Pairing& b) {
  return partition_join(b.as_partition(), Pairing::identity(b.k()).as_partition());
}

int cycle_count(const Pairing& b) { return cycle_partition(b).block_count(); }

// ------------------------------------------------------------------ twists

namespace {

int star(int x, int k) { return x < k ? x + k : x - k; }

Pairing relabel(const Pairing& b, const std::vector<int>& sigma) {
  std::vector<int> m(b.match().size());
  for (std::size_t x = 0; x < m.size(); ++x) m[sigma[x]] = sigma[b.match()[x]];
  return Pairing(std::move(m));
}

std::vector<int> relabel_colours(const std::vector<int>& colour, const std::vector<int>& sigma) {
  std::vector<int> c(colour.size());
  for (std::size_t x = 0; x < c.size(); ++x) c[sigma[x]] = colour[x];
  return c;
}

std::vector<int> twist_map(int k, int i) {
  if (i < 0 || i >= k) throw std::out_of_range("twist index out of range");
  std::vector<int> s(static_cast<std::size_t>(2 * k));
  std::iota(s.begin(), s.end(), 0);
  std::swap(s[i], s[k + i]);
  return s;
}

std::vector<int> star_map(int k) {
  std::vector<int> s(static_cast<std::size_t>(2 * k));
  for (int x = 0; x < 2 * k; ++x) s[x] = star(x, k);
  return s;
}

}  // namespace

Pairing twist(const Pairing& b, int i) { return relabel(b, twist_map(b.k(), i)); }

ColouredDiagram twist(const ColouredDiagram& b, int i) {
  const auto s = twist_map(b.k(), i);
  return ColouredDiagram{relabel(b.pairing, s), relabel_colours(b.colour, s)};
}

Pairing transpose_diagram(const Pairing& b) { return relabel(b, star_map(b.k())); }

ColouredDiagram transpose_diagram(const ColouredDiagram& b) {
  const auto s = star_map(b.k());
  return ColouredDiagram{relabel(b.pairing, s), relabel_colours(b.colour, s)};
}

SetPartition twist_partition(const SetPartition& p, int k, int i) {
  if (p.size() != 2 * k) throw std::invalid_argument("twist_partition: size mismatch");
  return SetPartition::from_labels(relabel_colours(p.labels(), twist_map(k, i)));
}

// ------------------------------------------------------------ orientation

namespace {

OrientedLoop traverse(const Pairing& b, int start, int sign) {
  const int k = b.k();
  OrientedLoop loop;
  int slot = start;
  int sg = sign;
  do {
    loop.slots.push_back(slot);
    loop.signs.push_back(sg);
    const int exit = sg == +1 ? k + slot : slot;
    const int y = b.partner(exit);
    if (y < k) {
      slot = y;
      sg = +1;
    } else {
      slot = y - k;
      sg = -1;
    }
  } while (!(slot == start && sg == sign));
  return loop;
}

}  // namespace

Orientation canonical_orientation(const Pairing& b) {
  const int k = b.k();
  Orientation s(static_cast<std::size_t>(k), 0);
  for (int m = 0; m < k; ++m) {
    if (s[m] != 0) continue;
    const auto loop = traverse(b, m, +1);
    for (std::size_t t = 0; t < loop.slots.size(); ++t) s[loop.slots[t]] = loop.signs[t];
  }
  return s;
}

bool is_valid_orientation(const Pairing& b, const Orientation& s) {
  const int k = b.k();
  if (static_cast<int>(s.size()) != k) return false;
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int m = 0; m < k; ++m) {
    if (seen[m]) continue;
    if (s[m] != 1 && s[m] != -1) return false;
    const auto loop = traverse(b, m, +1);
    const int flip = s[m];
    for (std::size_t t = 0; t < loop.slots.size(); ++t) {
      seen[loop.slots[t]] = 1;
      if (s[loop.slots[t]] != flip * loop.signs[t]) return false;
    }
  }
  return true;
}

std::vector<OrientedLoop> oriented_loops(const Pairing& b, const Orientation& s) {
  if (!is_valid_orientation(b, s)) throw std::invalid_argument("invalid orientation");
  const int k = b.k();
  std::vector<OrientedLoop> out;
  std::vector<char> seen(static_cast<std::size_t>(k), 0);
  for (int m = 0; m < k; ++m) {
    if (seen[m]) continue;
    auto loop = traverse(b, m, s[m]);
    for (int x : loop.slots) seen[x] = 1;
    out.push_back(std::move(loop));
  }
  return out;
}

Permutation sigma_of(const Pairing& b, const Orientation& s) {
  std::vector<std::vector<int>> cycles;
  for (const auto& loop : oriented_loops(b, s)) cycles.push_back(loop.slots);
  return Permutation::from_cycles(b.k(), cycles);
}

std::optional<ExtendedDiagram> diamond(const ColouredDiagram& r, const ExtendedDiagram& bs,
                                       const DimensionFunction& df) {
  auto comp = compose(r, bs.diagram, df);
  if (!comp) return std::nullopt;
  const Orientation old = bs.orientation.empty() ? canonical_orientation(bs.diagram.pairing) : bs.orientation;
  const auto& p = comp->diagram.pairing;
  Orientation s(static_cast<std::size_t>(p.k()), 0);
  for (int m = 0; m < p.k(); ++m) {
    if (s[m] != 0) continue;
    const auto loop = traverse(p, m, old[m]);
    for (std::size_t t = 0; t < loop.slots.size(); ++t) s[loop.slots[t]] = loop.signs[t];
  }
  comp->orientation = std::move(s);
  for (const auto& [cls, count] : bs.loops) comp->loops[cls] += count;
  return comp;
}

// ------------------------------------------------------------- elementary

Pairing Elementary::pairing(int k) const {
  return type == ElementaryType::Tau ? Pairing::tau(k, a, b) : Pairing::projector(k, a, b);
}

bool creates_cycle(const Elementary& r, const Pairing& b) {
  const auto joined = partition_join(b.as_partition(), r.pairing(b.k()).as_partition());
  return joined.block_count() == cycle_count(b) + 1;
}

std::optional<bool> creates_cycle_by_sign(const Elementary& r, const Pairing& b) {
  const auto cp = cycle_partition(b);
  if (cp.block_of(r.a) != cp.block_of(r.b)) return std::nullopt;
  const auto s = canonical_orientation(b);
  const int prod = s[r.a] * s[r.b];
  return r.type == ElementaryType::Tau ? prod == 1 : prod == -1;
}

std::vector<ColouredElementary> elementary_sets(const ColouredDiagram& b, ElementaryKind kind,
                                                const DimensionFunction& df) {
  const int k = b.k();
  std::vector<int> top(b.colour.begin() + k, b.colour.end());
  std::vector<ColouredElementary> out;
  for (int a = 0; a < k; ++a) {
    for (int c = a + 1; c < k; ++c) {
      const bool same = top[a] == top[c];
      if (kind == ElementaryKind::Diagonal && !same) continue;
      if (kind == ElementaryKind::Exclusive && same) continue;
      // transposition
      if (kind != ElementaryKind::WPlus) {
        Elementary e{ElementaryType::Tau, a, c};
        if (kind != ElementaryKind::TPlus || creates_cycle(e, b.pairing)) {
          ColouredDiagram r{Pairing::tau(k, a, c), std::vector<int>(static_cast<std::size_t>(2 * k))};
          for (int m = 0; m < k; ++m) {
            r.colour[m] = top[m];
            r.colour[k + m] = top[m];
          }
          r.colour[k + a] = top[c];
          r.colour[k + c] = top[a];
          out.push_back({e, std::move(r), -1});
        }
      }
      // projector with a single-colour bottom pair
      if (kind != ElementaryKind::TPlus && same) {
        Elementary e{ElementaryType::Projector, a, c};
        if (kind != ElementaryKind::WPlus || creates_cycle(e, b.pairing)) {
          for (int kappa = 0; kappa < df.colours(); ++kappa) {
            ColouredDiagram r{Pairing::projector(k, a, c), std::vector<int>(static_cast<std::size_t>(2 * k))};
            for (int m = 0; m < k; ++m) {
              r.colour[m] = top[m];
              r.colour[k + m] = top[m];
            }
            r.colour[k + a] = kappa;
            r.colour[k + c] = kappa;
            out.push_back({e, std::move(r), kappa});
          }
        }
      }
    }
  }
  return out;
}

int fnc(const ExtendedDiagram& x, int cls, const DimensionFunction& df) {
  if (cls < 0 || cls >= df.class_count()) throw std::out_of_range("unknown kernel class");
  const auto& p = x.diagram.pairing;
  const int k = p.k();
  const Orientation s = x.orientation.empty() ? canonical_orientation(p) : x.orientation;
  int count = 0;
  auto it = x.loops.find(cls);
  if (it != x.loops.end()) count += it->second;
  for (const auto& loop : oriented_loops(p, s)) {
    const int m = loop.slots.front();
    const int point = s[m] == 1 ? m : k + m;
    if (df.class_of(x.diagram.colour[point]) == cls) ++count;
  }
  return count;
}

// ------------------------------------------------------------------ words

Word plain_word(const std::vector<int>& letters) {
  Word w;
  for (int l : letters) w.push_back({l, false});
  return w;
}

Word strip_bars(const Word& w) {
  Word out = w;
  for (auto& l : out) l.bar = false;
  return out;
}

std::string word_to_string(const Word& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << 'x' << w[i].letter + 1 << (w[i].bar ? "bar" : "");
  }
  return os.str();
}

OWord parse_oword(std::string_view text) {
  OWord out;
  std::size_t p = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("cannot parse word '" + std::string(text) + "': " + why);
  };
  auto skip = [&] {
    while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
  };
  auto read_int = [&]() {
    std::size_t start = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (start == p) fail("expected an index");
    return std::stoi(std::string(text.substr(start, p - start)));
  };
  skip();
  while (p < text.size()) {
    if (text[p] != 'u') fail("expected 'u'");
    ++p;
    OLetter l;
    if (p < text.size() && text[p] == '[') {
      ++p;
      skip();
      l.i = read_int();
      skip();
      if (p >= text.size() || text[p] != ',') fail("expected ','");
      ++p;
      skip();
      l.j = read_int();
      skip();
      if (p >= text.size() || text[p] != ']') fail("expected ']'");
      ++p;
    } else {
      if (p + 2 > text.size() || !std::isdigit(static_cast<unsigned char>(text[p])) ||
          !std::isdigit(static_cast<unsigned char>(text[p + 1])))
        fail("expected two digits");
      l.i = text[p] - '0';
      l.j = text[p + 1] - '0';
      p += 2;
    }
    if (l.i < 1 || l.j < 1) fail("indices are 1-based");
    l.i -= 1;
    l.j -= 1;
    if (p < text.size() && text[p] == '*') {
      l.star = true;
      ++p;
    }
    out.push_back(l);
    skip();
  }
  if (out.empty()) fail("empty word");
  return out;
}

std::string oword_to_string(const OWord& u) {
  std::ostringstream os;
  for (std::size_t t = 0; t < u.size(); ++t) {
    if (t) os << ' ';
    if (u[t].i < 9 && u[t].j < 9)
      os << 'u' << u[t].i + 1 << u[t].j + 1;
    else
      os << "u[" << u[t].i + 1 << ',' << u[t].j + 1 << ']';
    if (u[t].star) os << '*';
  }
  return os.str();
}

std::pair<ColouredDiagram, Word> encode_word(const OWord& u) {
  if (u.empty()) throw std::invalid_argument("encode_word: empty word");
  const int p = static_cast<int>(u.size());
  ColouredDiagram b{Pairing::from_permutation(Permutation::full_cycle(p)),
                    std::vector<int>(static_cast<std::size_t>(2 * p))};
  Word w;
  for (int m = 0; m < p; ++m) {
    b.colour[m] = u[m].i;
    b.colour[p + m] = u[m].j;
    w.push_back({0, u[m].star});
  }
  for (int m = 0; m < p; ++m)
    if (u[m].star) b = twist(b, m);
  return {b, w};
}

std::vector<ColouredDiagram> expand_uncoloured(const Pairing& p, const DimensionFunction& df) {
  const auto pairs = p.pairs();
  std::vector<ColouredDiagram> out;
  std::vector<int> choice(pairs.size(), 0);
  const int n = df.colours();
  if (n == 0) return out;
  while (true) {
    ColouredDiagram d{p, std::vector<int>(p.match().size())};
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      d.colour[pairs[t].first] = choice[t];
      d.colour[pairs[t].second] = choice[t];
    }
    out.push_back(std::move(d));
    std::size_t t = 0;
    while (t < choice.size() && ++choice[t] == n) choice[t++] = 0;
    if (t == choice.size()) break;
  }
  return out;
}

// ------------------------------------------------------------------- text

namespace {

std::string point_text(int x, int k) {
  return x < k ? std::to_string(x + 1) : std::to_string(x - k + 1) + "'";
}

}  // namespace

std::string to_text(const ColouredDiagram& b) {
  const int k = b.k();
  std::ostringstream os;
  bool first = true;
  for (auto [x, y] : b.pairing.pairs()) {
    if (!first) os << ' ';
    first = false;
    os << '(' << point_text(x, k) << ',' << point_text(y, k) << ")@" << b.colour[x] + 1;
    if (b.colour[y] != b.colour[x]) os << ',' << b.colour[y] + 1;
  }
  return os.str();
}

ColouredDiagram parse_diagram(std::string_view text) {
  static const std::regex token(R"(\s*\(\s*(\d+)\s*('?)\s*,\s*(\d+)\s*('?)\s*\)(?:@(\d+)(?:,(\d+))?)?\s*)");
  std::string s(text);
  struct Raw {
    int x, y, cx, cy;
    bool px, py;
  };
  std::vector<Raw> raws;
  auto begin = s.cbegin();
  std::smatch m;
  while (begin != s.cend()) {
    if (!std::regex_search(begin, s.cend(), m, token, std::regex_constants::match_continuous))
      throw std::invalid_argument("cannot parse diagram: " + s);
    Raw r{};
    r.x = std::stoi(m[1]) - 1;
    r.px = m[2].length() > 0;
    r.y = std::stoi(m[3]) - 1;
    r.py = m[4].length() > 0;
    r.cx = m[5].matched ? std::stoi(m[5]) - 1 : 0;
    r.cy = m[6].matched ? std::stoi(m[6]) - 1 : r.cx;
    raws.push_back(r);
    begin = m[0].second;
  }
  const int k = static_cast<int>(raws.size());
  if (k == 0) throw std::invalid_argument("empty diagram");
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> colour(static_cast<std::size_t>(2 * k), -1);
  for (const auto& r : raws) {
    if (r.x < 0 || r.y < 0 || r.x >= k || r.y >= k || r.cx < 0 || r.cy < 0)
      throw std::invalid_argument("diagram point or colour out of range: " + s);
    const int x = r.px ? k + r.x : r.x;
    const int y = r.py ? k + r.y : r.y;
    pairs.emplace_back(x, y);
    colour[x] = r.cx;
    colour[y] = r.cy;
  }
  return ColouredDiagram{Pairing::from_pairs(k, pairs), colour};
}

}  // namespace mfe
