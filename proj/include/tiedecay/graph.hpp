#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tiedecay {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Symmetric tie-strength state over n nodes. Only unordered pairs (e < f) are
// stored, row by row: (0,1), (0,2), ..., (0,n-1), (1,2), ...
class TieMatrix {
 public:
  explicit TieMatrix(std::size_t n, double initial = 0.0);

  std::size_t size() const noexcept { return n_; }
  std::size_t pair_count() const noexcept { return strengths_.size(); }

  double operator()(NodeId e, NodeId f) const;
  void set(NodeId e, NodeId f, double s);

  std::span<const double> strengths() const noexcept { return strengths_; }
  std::span<double> strengths() noexcept { return strengths_; }

  std::size_t pair_index(NodeId e, NodeId f) const;
  Edge pair_at(std::size_t index) const;

 private:
  std::size_t n_;
  std::vector<double> strengths_;
};

// Flat index of pair (e, f), e < f, in an n-node upper triangle.
constexpr std::size_t pair_index(std::size_t n, std::size_t e, std::size_t f) noexcept {
  return e * (2 * n - e - 1) / 2 + (f - e - 1);
}
Edge pair_from_index(std::size_t n, std::size_t index);

enum class ThresholdMode { at_least, strictly_above };

struct Threshold {
  double g = 0.0;
};

bool passes(double s, Threshold t, ThresholdMode mode) noexcept;

// Pairs whose strength passes the threshold, in pair-index order.
std::vector<Edge> threshold_edges(const TieMatrix& m, Threshold t, ThresholdMode mode);

struct ComponentReport {
  std::vector<std::size_t> component_sizes;  // descending
  std::size_t largest = 0;
  double largest_fraction = 0.0;
};

ComponentReport components(std::size_t n, std::span<const Edge> edges);

// Component label per node; labels are the smallest node id in the component.
std::vector<NodeId> component_labels(std::size_t n, std::span<const Edge> edges);

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  NodeId find(NodeId x) noexcept;
  // Returns true if the two sets were distinct.
  bool unite(NodeId a, NodeId b) noexcept;
  std::size_t set_size(NodeId x) noexcept { return size_[find(x)]; }
  std::size_t largest() const noexcept { return largest_; }
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::size_t> size_;
  std::size_t largest_ = 1;
};

enum class GccRegime { subcritical, critical, supercritical };

GccRegime er_gcc_criterion(std::size_t n, double p_active);

// Erdos-Renyi G(n, q) edge list, sampled by geometric skipping over pair indices.
std::vector<Edge> sample_er_edges(std::size_t n, double q, std::uint64_t seed, std::uint64_t realization);

// Mean largest fraction of G(n, q) over `realizations` samples.
double er_mean_largest_fraction(std::size_t n, double q, std::size_t realizations, std::uint64_t seed,
                                unsigned workers = 1);

}  // namespace tiedecay
