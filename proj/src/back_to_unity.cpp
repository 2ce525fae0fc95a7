#include "tiedecay/back_to_unity.hpp"

#include <algorithm>
#include <cmath>

#include "edge_process.hpp"
#include "tiedecay/errors.hpp"
#include "tiedecay/parallel.hpp"
#include "tiedecay/rng.hpp"
#include "tiedecay/stats.hpp"

namespace tiedecay {

namespace {

constexpr std::size_t kBlock = 1 << 16;

double reset(double) { return 1.0; }

void check_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(where) + ": p must lie in [0, 1]");
}

void check_threshold(double g, const char* where) {
  if (!(g > 0.0 && g <= 1.0)) throw InputError(std::string(where) + ": g must lie in (0, 1]");
}

// Largest fraction of one realization: pairs with strength >= g are active.
double largest_fraction(const BackToUnityParams& params, const detail::EdgeProcess& process,
                        const StreamFamily& family) {
  const std::size_t n = params.n;
  UnionFind uf(n);
  std::size_t idx = 0;
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t f = e + 1; f < n; ++f, ++idx) {
      CounterRng rng = family.stream(idx);
      const double s = process.run(rng, 0.0, reset);
      if (s > 0.0 && s >= params.g) uf.unite(static_cast<NodeId>(e), static_cast<NodeId>(f));
    }
  }
  return static_cast<double>(uf.largest()) / static_cast<double>(n);
}

}  // namespace

std::uint64_t steps_above(double alpha, double g) {
  if (!(alpha > 0.0)) throw InputError("steps_above: alpha must be positive");
  check_threshold(g, "steps_above");
  return static_cast<std::uint64_t>(std::ceil(-std::log(g) / alpha));
}

std::uint64_t BackToUnityParams::q() const { return steps_above(alpha, g); }

void BackToUnityParams::validate() const {
  if (n < 2) throw InputError("BackToUnityParams: n must be at least 2");
  check_probability(p, "BackToUnityParams");
  if (!(alpha > 0.0)) throw InputError("BackToUnityParams: alpha must be positive");
  check_threshold(g, "BackToUnityParams");
}

double step_edge_b2u(double s, bool interacted, double alpha) {
  if (!(s >= 0.0 && s <= 1.0)) throw InputError("step_edge_b2u: strength must lie in [0, 1]");
  return interacted ? 1.0 : s * std::exp(-alpha);
}

double moment_stationary_b2u(double p, double alpha, int order) {
  check_probability(p, "moment_stationary_b2u");
  if (order < 1) throw InputError("moment_stationary_b2u: order must be at least 1");
  if (!(alpha >= 0.0)) throw InputError("moment_stationary_b2u: alpha must be non-negative");
  if (p == 0.0 && alpha == 0.0) throw DomainError("moment_stationary_b2u: undefined for p = 0 and alpha = 0");
  const double sigma_n = std::exp(-alpha * order);
  return p / (1.0 - sigma_n * (1.0 - p));
}

double prob_active(double p, double alpha, double g) {
  check_probability(p, "prob_active");
  const std::uint64_t q = steps_above(alpha, g);
  if (q == 0) return 0.0;
  if (p == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(q) * std::log1p(-p));
}

bool gcc_predicted(std::size_t n, double p, double alpha, double g) {
  if (n < 2) throw InputError("gcc_predicted: n must be at least 2");
  return prob_active(p, alpha, g) > 1.0 / static_cast<double>(n);
}

double critical_p(std::size_t n, double alpha, double g) {
  if (n < 2) throw InputError("critical_p: n must be at least 2");
  const std::uint64_t q = steps_above(alpha, g);
  if (q == 0) throw DomainError("critical_p: no finite critical probability for g = 1");
  return -std::expm1(std::log1p(-1.0 / static_cast<double>(n)) / static_cast<double>(q));
}

double critical_p_approx(std::size_t n, double alpha, double g) {
  if (n < 2) throw InputError("critical_p_approx: n must be at least 2");
  const std::uint64_t q = steps_above(alpha, g);
  if (q == 0) throw DomainError("critical_p_approx: no finite critical probability for g = 1");
  return 1.0 / (static_cast<double>(n) * static_cast<double>(q));
}

TieMatrix simulate_b2u(const BackToUnityParams& params, std::uint64_t seed, std::uint64_t realization,
                       unsigned workers) {
  params.validate();
  TieMatrix m(params.n);
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  const StreamFamily family(seed, realization);
  auto strengths = m.strengths();
  parallel_for((strengths.size() + kBlock - 1) / kBlock, workers, [&](std::size_t b) {
    const std::size_t end = std::min(strengths.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      CounterRng rng = family.stream(i);
      strengths[i] = process.run(rng, 0.0, reset);
    }
  });
  return m;
}

std::vector<double> gcc_fractions_b2u(const BackToUnityParams& params, std::size_t realizations,
                                      std::uint64_t seed, unsigned workers) {
  params.validate();
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  std::vector<double> out(realizations);
  parallel_for(realizations, workers,
               [&](std::size_t r) { out[r] = largest_fraction(params, process, StreamFamily(seed, r)); });
  return out;
}

std::vector<SweepRow> gcc_sweep_b2u(const BackToUnityParams& params, std::span<const double> p_grid,
                                    std::size_t realizations, std::uint64_t seed, unsigned workers) {
  if (realizations < 1) throw InputError("gcc_sweep_b2u: need at least one realization");
  std::vector<detail::EdgeProcess> processes;
  processes.reserve(p_grid.size());
  for (double p : p_grid) {
    BackToUnityParams point = params;
    point.p = p;
    point.validate();
    processes.emplace_back(p, params.alpha, params.T);
  }
  const std::size_t items = realizations * p_grid.size();
  std::vector<double> fractions(items);
  parallel_for(items, workers, [&](std::size_t item) {
    const std::size_t k = item / realizations;
    const std::size_t r = item % realizations;
    fractions[item] = largest_fraction(params, processes[k], StreamFamily(seed, r));
  });
  std::vector<SweepRow> rows;
  rows.reserve(p_grid.size());
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    RunningStats stats;
    for (std::size_t r = 0; r < realizations; ++r) stats.add(fractions[k * realizations + r]);
    rows.push_back({p_grid[k], stats.mean(), stats.std_error()});
  }
  return rows;
}

std::vector<double> sample_edges_b2u(const BackToUnityParams& params, std::size_t count, std::uint64_t seed,
                                     unsigned workers) {
  params.validate();
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  const StreamFamily family(seed, 0);
  std::vector<double> out(count);
  parallel_for((count + kBlock - 1) / kBlock, workers, [&](std::size_t b) {
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      CounterRng rng = family.stream(i);
      out[i] = process.run(rng, 0.0, reset);
    }
  });
  return out;
}

std::vector<double> edge_trace_b2u(const BackToUnityParams& params, std::uint64_t seed, std::uint64_t edge) {
  params.validate();
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  CounterRng rng(seed, 0, edge);
  std::vector<double> trace;
  const double alpha = params.alpha;
  process.run_stepwise(rng, 0.0, [alpha](double s, bool hit) { return step_edge_b2u(s, hit, alpha); }, &trace);
  return trace;
}

}  // namespace tiedecay
