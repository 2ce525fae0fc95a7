#include <algorithm>
#include <functional>
#include <queue>
#include <random>
#include <set>

#include "doctest.h"
#include "tiedecay/errors.hpp"
#include "tiedecay/graph.hpp"

using namespace tiedecay;

namespace {

// Plain BFS census, kept independent of the union-find implementation.
std::vector<std::size_t> bfs_sizes(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [e, f] : edges) {
    adj[e].push_back(f);
    adj[f].push_back(e);
  }
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t count = 0;
    std::queue<NodeId> q;
    q.push(static_cast<NodeId>(s));
    seen[s] = true;
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop();
      ++count;
      for (NodeId u : adj[v]) {
        if (!seen[u]) {
          seen[u] = true;
          q.push(u);
        }
      }
    }
    sizes.push_back(count);
  }
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

std::vector<Edge> random_edges(std::mt19937_64& gen, std::size_t n, std::size_t count) {
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::vector<Edge> edges;
  while (edges.size() < count) {
    const NodeId a = node(gen), b = node(gen);
    if (a != b) edges.emplace_back(a, b);
  }
  return edges;
}

}  // namespace

TEST_CASE("threshold_edges boundary semantics") {
  TieMatrix m(3);
  m.set(0, 1, 0.96);
  m.set(1, 2, 0.5);
  CHECK(threshold_edges(m, {0.95}, ThresholdMode::at_least) == std::vector<Edge>{{0, 1}});

  TieMatrix b(2);
  b.set(0, 1, 0.95);
  CHECK(threshold_edges(b, {0.95}, ThresholdMode::strictly_above).empty());
  CHECK(threshold_edges(b, {0.95}, ThresholdMode::at_least).size() == 1);
}

TEST_CASE("zero threshold strictly above keeps positive pairs") {
  TieMatrix m(4);
  m.set(0, 3, 0.1);
  m.set(1, 2, 2.0);
  const auto edges = threshold_edges(m, {0.0}, ThresholdMode::strictly_above);
  CHECK(edges == std::vector<Edge>{{0, 3}, {1, 2}});
}

TEST_CASE("threshold_edges is monotone in g") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  TieMatrix m(30);
  for (auto& s : m.strengths()) s = u(gen);
  for (auto mode : {ThresholdMode::at_least, ThresholdMode::strictly_above}) {
    std::size_t prev = m.pair_count() + 1;
    for (double g = 0.0; g <= 2.0; g += 0.05) {
      const auto edges = threshold_edges(m, {g}, mode);
      CHECK(edges.size() <= prev);
      prev = edges.size();
    }
  }
}

TEST_CASE("TieMatrix stores symmetric pairs") {
  TieMatrix m(5);
  m.set(3, 1, 4.0);
  CHECK(m(1, 3) == 4.0);
  CHECK(m(3, 1) == 4.0);
  CHECK_THROWS_AS(m.set(2, 2, 1.0), InputError);
  CHECK_THROWS_AS(m.set(0, 5, 1.0), InputError);
  CHECK_THROWS_AS(m.set(0, 1, -1.0), InputError);
  for (std::size_t i = 0; i < m.pair_count(); ++i) {
    const auto [e, f] = pair_from_index(5, i);
    CHECK(e < f);
    CHECK(m.pair_index(e, f) == i);
  }
}

TEST_CASE("pair_from_index inverts pair_index on larger triangles") {
  for (std::size_t n : {2u, 3u, 17u, 2000u}) {
    const std::size_t pairs = n * (n - 1) / 2;
    for (std::size_t i = 0; i < pairs; i += std::max<std::size_t>(1, pairs / 997)) {
      const auto [e, f] = pair_from_index(n, i);
      CHECK(pair_index(n, e, f) == i);
    }
    const auto [e, f] = pair_from_index(n, pairs - 1);
    CHECK(e == n - 2);
    CHECK(f == n - 1);
  }
}

TEST_CASE("components on small graphs") {
  const std::vector<Edge> path{{0, 1}, {1, 2}};
  auto r = components(4, path);
  CHECK(r.component_sizes == std::vector<std::size_t>{3, 1});
  CHECK(r.largest == 3);
  CHECK(r.largest_fraction == 0.75);

  r = components(5, {});
  CHECK(r.component_sizes == std::vector<std::size_t>(5, 1));
  CHECK(r.largest_fraction == doctest::Approx(0.2));

  const std::vector<Edge> bad{{0, 4}};
  CHECK_THROWS_AS(components(4, bad), InputError);
}

TEST_CASE("components agree with BFS on ER graph n=100 p=0.05") {
  const auto edges = sample_er_edges(100, 0.05, 99, 0);
  const auto r = components(100, edges);
  CHECK(r.component_sizes == bfs_sizes(100, edges));
}

TEST_CASE("union-find agrees with BFS on 1000 random graphs") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> nodes(1, 64);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = nodes(gen);
    std::uniform_int_distribution<std::size_t> count(0, n < 2 ? 0 : 2 * n);
    const auto edges = n < 2 ? std::vector<Edge>{} : random_edges(gen, n, count(gen));
    const auto r = components(n, edges);
    REQUIRE(r.component_sizes == bfs_sizes(n, edges));
    std::size_t total = 0;
    for (auto s : r.component_sizes) total += s;
    CHECK(total == n);
    CHECK(r.largest == r.component_sizes.front());
  }
}

TEST_CASE("component_labels name each component by its smallest node") {
  const std::vector<Edge> edges{{4, 2}, {2, 5}, {0, 1}};
  const auto labels = component_labels(6, edges);
  CHECK(labels == std::vector<NodeId>{0, 0, 2, 3, 2, 2});
}

TEST_CASE("ER criterion") {
  CHECK(er_gcc_criterion(1000, 0.0054) == GccRegime::supercritical);
  CHECK(er_gcc_criterion(1000, 9.09e-4) == GccRegime::subcritical);
  CHECK(er_gcc_criterion(2, 0.5) == GccRegime::critical);
}

TEST_CASE("ER sampler hits the requested edge density") {
  const std::size_t n = 400;
  const double q = 0.01;
  std::size_t total = 0;
  const int reps = 50;
  for (int r = 0; r < reps; ++r) {
    const auto edges = sample_er_edges(n, q, 5, static_cast<std::uint64_t>(r));
    std::set<Edge> unique(edges.begin(), edges.end());
    CHECK(unique.size() == edges.size());
    for (auto [e, f] : edges) CHECK(e < f);
    total += edges.size();
  }
  const double pairs = static_cast<double>(n * (n - 1) / 2) * reps;
  const double expected = pairs * q;
  CHECK(std::abs(static_cast<double>(total) - expected) < 4.0 * std::sqrt(expected * (1 - q)));
}

TEST_CASE("phase transition smoke test around 1/n") {
  const std::size_t n = 1000;
  const auto above = sample_er_edges(n, 1.0, 1, 0);  // sanity: complete graph
  CHECK(components(n, above).largest == n);

  std::vector<double> hi, lo;
  for (std::uint64_t r = 0; r < 100; ++r) {
    hi.push_back(components(n, sample_er_edges(n, 2.0 / n, 11, r)).largest_fraction);
    lo.push_back(components(n, sample_er_edges(n, 0.5 / n, 12, r)).largest_fraction);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto se = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  };
  CHECK(mean(hi) - mean(lo) > 5.0 * std::hypot(se(hi), se(lo)));
}
