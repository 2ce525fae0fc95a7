#include "tiedecay/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "tiedecay/errors.hpp"
#include "tiedecay/parallel.hpp"
#include "tiedecay/rng.hpp"

namespace tiedecay {

namespace {

void check_pair(std::size_t n, NodeId e, NodeId f) {
  if (e >= n || f >= n) {
    throw InputError("node index out of range: (" + std::to_string(e) + ", " + std::to_string(f) +
                     ") with n=" + std::to_string(n));
  }
  if (e == f) throw InputError("self-pairs are not representable");
}

std::size_t row_start(std::size_t n, std::size_t e) { return e * (2 * n - e - 1) / 2; }

}  // namespace

TieMatrix::TieMatrix(std::size_t n, double initial) : n_(n) {
  if (n == 0) throw InputError("TieMatrix needs at least one node");
  if (!(initial >= 0.0)) throw InputError("tie strengths must be non-negative");
  strengths_.assign(n * (n - 1) / 2, initial);
}

std::size_t TieMatrix::pair_index(NodeId e, NodeId f) const {
  check_pair(n_, e, f);
  if (e > f) std::swap(e, f);
  return tiedecay::pair_index(n_, e, f);
}

double TieMatrix::operator()(NodeId e, NodeId f) const { return strengths_[pair_index(e, f)]; }

void TieMatrix::set(NodeId e, NodeId f, double s) {
  if (!(s >= 0.0)) throw InputError("tie strengths must be non-negative");
  strengths_[pair_index(e, f)] = s;
}

Edge TieMatrix::pair_at(std::size_t index) const { return pair_from_index(n_, index); }

Edge pair_from_index(std::size_t n, std::size_t index) {
  if (n < 2 || index >= n * (n - 1) / 2) throw InputError("pair index out of range");
  // invert row_start(e) <= index via the quadratic formula, then fix rounding
  const double m = 2.0 * static_cast<double>(n) - 1.0;
  double guess = std::floor((m - std::sqrt(m * m - 8.0 * static_cast<double>(index))) / 2.0);
  std::size_t e = static_cast<std::size_t>(std::max(0.0, guess));
  while (e > 0 && row_start(n, e) > index) --e;
  while (e + 1 < n && row_start(n, e + 1) <= index) ++e;
  const std::size_t f = index - row_start(n, e) + e + 1;
  return {static_cast<NodeId>(e), static_cast<NodeId>(f)};
}

bool passes(double s, Threshold t, ThresholdMode mode) noexcept {
  return mode == ThresholdMode::at_least ? s >= t.g : s > t.g;
}

std::vector<Edge> threshold_edges(const TieMatrix& m, Threshold t, ThresholdMode mode) {
  if (!(t.g >= 0.0)) throw InputError("threshold must be non-negative");
  std::vector<Edge> out;
  const std::size_t n = m.size();
  auto s = m.strengths();
  std::size_t idx = 0;
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t f = e + 1; f < n; ++f, ++idx) {
      if (passes(s[idx], t, mode)) out.emplace_back(static_cast<NodeId>(e), static_cast<NodeId>(f));
    }
  }
  return out;
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1), largest_(n > 0 ? 1 : 0) {
  for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<NodeId>(i);
}

NodeId UnionFind::find(NodeId x) noexcept {
  NodeId root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const NodeId next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(NodeId a, NodeId b) noexcept {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  largest_ = std::max(largest_, size_[a]);
  return true;
}

ComponentReport components(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw InputError("components: empty node set");
  UnionFind uf(n);
  for (const auto& [e, f] : edges) {
    if (e >= n || f >= n) {
      throw InputError("edge endpoint out of range: (" + std::to_string(e) + ", " + std::to_string(f) +
                       ") with n=" + std::to_string(n));
    }
    uf.unite(e, f);
  }
  ComponentReport r;
  for (std::size_t i = 0; i < n; ++i) {
    if (uf.find(static_cast<NodeId>(i)) == i) r.component_sizes.push_back(uf.set_size(static_cast<NodeId>(i)));
  }
  std::sort(r.component_sizes.begin(), r.component_sizes.end(), std::greater<>());
  r.largest = r.component_sizes.front();
  r.largest_fraction = static_cast<double>(r.largest) / static_cast<double>(n);
  return r;
}

std::vector<NodeId> component_labels(std::size_t n, std::span<const Edge> edges) {
  UnionFind uf(n);
  for (const auto& [e, f] : edges) {
    if (e >= n || f >= n) throw InputError("edge endpoint out of range");
    uf.unite(e, f);
  }
  std::vector<NodeId> smallest(n, static_cast<NodeId>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId root = uf.find(static_cast<NodeId>(i));
    smallest[root] = std::min<NodeId>(smallest[root], static_cast<NodeId>(i));
  }
  std::vector<NodeId> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = smallest[uf.find(static_cast<NodeId>(i))];
  return labels;
}

GccRegime er_gcc_criterion(std::size_t n, double p_active) {
  if (n < 2) throw InputError("er_gcc_criterion: need n >= 2");
  if (!(p_active >= 0.0 && p_active <= 1.0)) throw InputError("er_gcc_criterion: p_active must lie in [0, 1]");
  const double critical = 1.0 / static_cast<double>(n);
  if (p_active > critical) return GccRegime::supercritical;
  if (p_active < critical) return GccRegime::subcritical;
  return GccRegime::critical;
}

std::vector<Edge> sample_er_edges(std::size_t n, double q, std::uint64_t seed, std::uint64_t realization) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("sample_er_edges: q must lie in [0, 1]");
  std::vector<Edge> edges;
  if (n < 2 || q == 0.0) return edges;
  const std::size_t pairs = n * (n - 1) / 2;
  CounterRng rng(seed, realization, 0x4552ULL);
  const double log_q = std::log1p(-q);
  std::size_t idx = 0;
  // walk pair indices row by row so the row lookup stays incremental
  std::size_t e = 0;
  std::size_t row_end = n - 1;
  for (;;) {
    const std::uint64_t skip = geometric_failures(rng, log_q);
    if (skip >= pairs - idx) break;
    idx += skip;
    while (idx >= row_end) {
      ++e;
      row_end += n - 1 - e;
    }
    const std::size_t f = idx - (row_end - (n - 1 - e)) + e + 1;
    edges.emplace_back(static_cast<NodeId>(e), static_cast<NodeId>(f));
    ++idx;
    if (idx >= pairs) break;
  }
  return edges;
}

double er_mean_largest_fraction(std::size_t n, double q, std::size_t realizations, std::uint64_t seed,
                                unsigned workers) {
  std::vector<double> fractions(realizations);
  parallel_for(realizations, workers, [&](std::size_t r) {
    const auto edges = sample_er_edges(n, q, seed, r);
    fractions[r] = components(n, edges).largest_fraction;
  });
  double sum = 0.0;
  for (double f : fractions) sum += f;
  return realizations ? sum / static_cast<double>(realizations) : 0.0;
}

}  // namespace tiedecay
