#include "mfe/ncpart.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mfe {

namespace {

std::vector<int> canonical_labels(const std::vector<int>& raw, int& count) {
  std::vector<int> out(raw.size());
  std::vector<std::pair<int, int>> seen;
  count = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(),
                           [&](const auto& kv) { return kv.first == raw[i]; });
    if (it == seen.end()) {
      seen.emplace_back(raw[i], count);
      out[i] = count++;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

// Union-find over a fixed ground set.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool crosses_with_last(const std::vector<int>& lab, int x) {
  const int L = lab[x];
  for (int b = 0; b < x; ++b) {
    if (lab[b] != L) continue;
    for (int a = 0; a < b; ++a) {
      if (lab[a] == L) continue;
      for (int c = b + 1; c < x; ++c)
        if (lab[c] == lab[a]) return true;
    }
  }
  return false;
}

}  // namespace

SetPartition::SetPartition(int ground_size, const std::vector<std::vector<int>>& blocks) {
  if (ground_size < 0) throw std::invalid_argument("negative ground size");
  std::vector<int> raw(static_cast<std::size_t>(ground_size), -1);
  int b = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw std::invalid_argument("empty block");
    for (int x : block) {
      if (x < 0 || x >= ground_size) throw std::invalid_argument("point out of range");
      if (raw[x] != -1) throw std::invalid_argument("blocks overlap");
      raw[x] = b;
    }
    ++b;
  }
  for (int v : raw)
    if (v == -1) throw std::invalid_argument("blocks do not cover the ground set");
  label_ = canonical_labels(raw, blocks_);
}

SetPartition SetPartition::from_labels(const std::vector<int>& labels) {
  SetPartition p;
  p.label_ = canonical_labels(labels, p.blocks_);
  return p;
}

SetPartition SetPartition::singletons(int ground_size) {
  std::vector<int> l(static_cast<std::size_t>(ground_size));
  std::iota(l.begin(), l.end(), 0);
  return from_labels(l);
}

SetPartition SetPartition::one_block(int ground_size) {
  return from_labels(std::vector<int>(static_cast<std::size_t>(ground_size), 0));
}

std::vector<std::vector<int>> SetPartition::blocks() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(blocks_));
  for (int i = 0; i < size(); ++i) out[label_[i]].push_back(i);
  return out;
}

bool SetPartition::refines(const SetPartition& other) const {
  if (other.size() != size()) throw std::invalid_argument("mismatched ground sets");
  std::vector<int> image(static_cast<std::size_t>(blocks_), -1);
  for (int i = 0; i < size(); ++i) {
    int& im = image[label_[i]];
    if (im == -1)
      im = other.label_[i];
    else if (im != other.label_[i])
      return false;
  }
  return true;
}

bool SetPartition::is_noncrossing() const {
  for (int x = 0; x < size(); ++x)
    if (crosses_with_last(label_, x)) return false;
  return true;
}

std::string SetPartition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first_block = true;
  for (const auto& b : blocks()) {
    if (!first_block) os << ',';
    first_block = false;
    os << '{';
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i] + 1;
    os << '}';
  }
  os << '}';
  return os.str();
}

SetPartition partition_join(const SetPartition& p, const SetPartition& q) {
  if (p.size() != q.size()) throw std::invalid_argument("mismatched ground sets");
  Dsu dsu(p.size());
  std::vector<int> first_p(static_cast<std::size_t>(p.block_count()), -1);
  std::vector<int> first_q(static_cast<std::size_t>(q.block_count()), -1);
  for (int i = 0; i < p.size(); ++i) {
    int& fp = first_p[p.block_of(i)];
    if (fp == -1) fp = i; else dsu.unite(fp, i);
    int& fq = first_q[q.block_of(i)];
    if (fq == -1) fq = i; else dsu.unite(fq, i);
  }
  std::vector<int> l(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) l[i] = dsu.find(i);
  return SetPartition::from_labels(l);
}

SetPartition partition_meet(const SetPartition& p, const SetPartition& q) {
  if (p.size() != q.size()) throw std::invalid_argument("mismatched ground sets");
  std::vector<int> l(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) l[i] = p.block_of(i) * (q.block_count() + 1) + q.block_of(i);
  return SetPartition::from_labels(l);
}

NonCrossingPartition::NonCrossingPartition(SetPartition p) : p_(std::move(p)) {
  if (!p_.is_noncrossing()) throw std::invalid_argument("partition has a crossing: " + p_.to_string());
}

std::vector<NonCrossingPartition> enumerate_nc(int k, int bound) {
  if (k < 0) throw std::invalid_argument("negative size");
  if (k > bound) throw std::out_of_range("enumerate_nc: size over bound");
  std::vector<NonCrossingPartition> out;
  std::vector<int> lab(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int x, int used) {
    if (x == k) {
      out.emplace_back(SetPartition::from_labels(lab));
      return;
    }
    for (int L = 0; L <= used; ++L) {
      lab[x] = L;
      if (crosses_with_last(lab, x)) continue;
      rec(x + 1, std::max(used, L + 1));
    }
  };
  rec(0, 0);
  return out;
}

std::vector<SetPartition> enumerate_set_partitions(int k, int bound) {
  if (k < 0) throw std::invalid_argument("negative size");
  if (k > bound) throw std::out_of_range("enumerate_set_partitions: size over bound");
  std::vector<SetPartition> out;
  std::vector<int> lab(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int x, int used) {
    if (x == k) {
      out.push_back(SetPartition::from_labels(lab));
      return;
    }
    for (int L = 0; L <= used; ++L) {
      lab[x] = L;
      rec(x + 1, std::max(used, L + 1));
    }
  };
  rec(0, 0);
  return out;
}

namespace {

// mu(sigma, 1_m) = mu(0_m, K(sigma)).
Rational mobius_to_top(const NonCrossingPartition& sigma) {
  Rational r = 1;
  for (const auto& w : kreweras_complement(sigma).blocks()) {
    const long s = static_cast<long>(w.size());
    Rational c(catalan(static_cast<unsigned long>(s - 1)));
    r *= (s % 2 == 1) ? c : Rational(-c);
  }
  return r;
}

}  // namespace

Rational mobius_nc(const NonCrossingPartition& pi, const NonCrossingPartition& rho) {
  if (pi.size() != rho.size()) throw std::invalid_argument("mismatched ground sets");
  if (!pi.leq(rho)) throw std::invalid_argument("mobius_nc: pi is not below rho");
  Rational r = 1;
  for (const auto& v : rho.blocks()) {
    std::vector<int> local(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) local[i] = pi.underlying().block_of(v[i]);
    r *= mobius_to_top(NonCrossingPartition(SetPartition::from_labels(local)));
  }
  return r;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> hit(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || v >= size() || hit[v]) throw std::invalid_argument("not a permutation");
    hit[v] = 1;
  }
}

Permutation Permutation::identity(int k) {
  std::vector<int> im(static_cast<std::size_t>(k));
  std::iota(im.begin(), im.end(), 0);
  return Permutation(std::move(im));
}

Permutation Permutation::transposition(int k, int a, int b) {
  auto p = identity(k);
  if (a < 0 || b < 0 || a >= k || b >= k || a == b) throw std::invalid_argument("bad transposition");
  std::swap(p.images_[a], p.images_[b]);
  return p;
}

Permutation Permutation::full_cycle(int k) {
  if (k < 0) throw std::invalid_argument("negative size");
  std::vector<int> im(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) im[i] = (i + 1) % k;
  return Permutation(std::move(im));
}

Permutation Permutation::from_cycles(int k, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> im(static_cast<std::size_t>(k));
  std::iota(im.begin(), im.end(), 0);
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] < 0 || c[i] >= k || used[c[i]]) throw std::invalid_argument("bad cycle list");
      used[c[i]] = 1;
      im[c[i]] = c[(i + 1) % c.size()];
    }
  }
  return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
  std::vector<int> im(images_.size());
  for (int i = 0; i < size(); ++i) im[images_[i]] = i;
  return Permutation(std::move(im));
}

Permutation Permutation::operator*(const Permutation& other) const {
  if (other.size() != size()) throw std::invalid_argument("size mismatch");
  std::vector<int> im(images_.size());
  for (int i = 0; i < size(); ++i) im[i] = images_[other.images_[i]];
  return Permutation(std::move(im));
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(images_.size(), 0);
  for (int i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> c;
    for (int x = i; !seen[x]; x = images_[x]) {
      seen[x] = 1;
      c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return out;
}

int Permutation::cycle_count() const { return static_cast<int>(cycles().size()); }

SetPartition Permutation::cycle_partition() const {
  std::vector<int> lab(images_.size());
  int b = 0;
  for (const auto& c : cycles()) {
    for (int x : c) lab[x] = b;
    ++b;
  }
  return SetPartition::from_labels(lab);
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<int> t;
  for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
  std::sort(t.rbegin(), t.rend());
  return t;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  for (const auto& c : cycles()) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i] + 1;
    os << ')';
  }
  return os.str();
}

Permutation nc_to_permutation(const NonCrossingPartition& pi) {
  return Permutation::from_cycles(pi.size(), pi.blocks());
}

int geodesic_distance(const Permutation& sigma) { return sigma.size() - sigma.cycle_count(); }

Integer count_minimal_factorizations(const Permutation& sigma) {
  const unsigned long d = static_cast<unsigned long>(geodesic_distance(sigma));
  Integer num = factorial(d);
  Integer den = 1;
  Integer prod = 1;
  for (int len : sigma.cycle_type()) {
    if (len < 2) continue;
    den *= factorial(static_cast<unsigned long>(len - 1));
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(len), static_cast<unsigned long>(len - 2));
    prod *= p;
  }
  return num / den * prod;
}

NonCrossingPartition kreweras_complement(const NonCrossingPartition& pi) {
  const auto sigma = nc_to_permutation(pi);
  const auto k = sigma.inverse() * Permutation::full_cycle(pi.size());
  return NonCrossingPartition(k.cycle_partition());
}

}  // namespace mfe
