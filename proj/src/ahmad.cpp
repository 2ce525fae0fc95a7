#include "tiedecay/ahmad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "edge_process.hpp"
#include "tiedecay/errors.hpp"
#include "tiedecay/parallel.hpp"
#include "tiedecay/rng.hpp"

namespace tiedecay {

namespace {

constexpr std::size_t kBlock = 1 << 16;

std::size_t block_count(std::size_t items) { return (items + kBlock - 1) / kBlock; }

struct WeightedEdge {
  double s;
  NodeId e, f;
};

}  // namespace

double AhmadParams::sigma() const { return std::exp(-alpha); }

void AhmadParams::validate() const {
  if (n < 2) throw InputError("AhmadParams: n must be at least 2");
  if (!(p >= 0.0 && p < 1.0)) throw InputError("AhmadParams: p must lie in [0, 1)");
  if (!(alpha > 0.0)) throw InputError("AhmadParams: alpha must be positive");
  if (!(s0 >= 0.0)) throw InputError("AhmadParams: s0 must be non-negative");
}

double step_edge(double s, bool interacted, double alpha) {
  if (!(s >= 0.0)) throw InputError("step_edge: strength must be non-negative");
  return interacted ? s + 1.0 : s * std::exp(-alpha);
}

TieMatrix simulate(const AhmadParams& params, std::uint64_t seed, std::uint64_t realization, unsigned workers) {
  params.validate();
  TieMatrix m(params.n);
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  const StreamFamily family(seed, realization);
  auto strengths = m.strengths();
  const auto plus_one = [](double s) { return s + 1.0; };
  parallel_for(block_count(strengths.size()), workers, [&](std::size_t b) {
    const std::size_t end = std::min(strengths.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      CounterRng rng = family.stream(i);
      strengths[i] = process.run(rng, params.s0, plus_one);
    }
  });
  return m;
}

double mean_finite_time(const AhmadParams& params, std::uint64_t t) {
  if (!(params.p >= 0.0 && params.p < 1.0)) throw InputError("mean_finite_time: p must lie in [0, 1)");
  if (!(params.alpha > 0.0)) throw InputError("mean_finite_time: alpha must be positive");
  // inner sum over j is geometric: (1 - sigma^{t-i+1}) / (1 - sigma)
  double total = 0.0;
  double p_pow = 1.0;
  for (std::uint64_t i = 1; i <= t; ++i) {
    p_pow *= params.p;
    if (p_pow == 0.0) break;
    const double terms = static_cast<double>(t - i + 1);
    total += p_pow * -std::expm1(-params.alpha * terms);
  }
  return total / -std::expm1(-params.alpha);
}

double mean_stationary(double p, double alpha) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("mean_stationary: no stationary state unless 0 <= p < 1");
  if (!(alpha > 0.0)) throw DomainError("mean_stationary: no stationary state unless alpha > 0");
  return p / (-std::expm1(-alpha) * (1.0 - p));
}

double variance_stationary(double p, double alpha) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("variance_stationary: no stationary state unless 0 <= p < 1");
  if (!(alpha > 0.0)) throw DomainError("variance_stationary: no stationary state unless alpha > 0");
  return p / (-std::expm1(-2.0 * alpha) * (1.0 - p) * (1.0 - p));
}

std::vector<double> raw_moments_stationary(double p, double alpha, int n_max) {
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("raw_moments_stationary: no stationary state unless 0 <= p < 1");
  if (!(alpha > 0.0)) throw DomainError("raw_moments_stationary: no stationary state unless alpha > 0");
  if (n_max < 1) throw InputError("raw_moments_stationary: n_max must be at least 1");
  // m_n (1 - p)(1 - sigma^n) = p sum_{j=1}^{n} C(n, j) m_{n-j}
  std::vector<double> m(static_cast<std::size_t>(n_max) + 1, 0.0);
  m[0] = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 1; j <= n; ++j) {
      binom = binom * (n - j + 1) / j;
      sum += binom * m[static_cast<std::size_t>(n - j)];
    }
    m[static_cast<std::size_t>(n)] = p * sum / ((1.0 - p) * -std::expm1(-alpha * n));
  }
  return {m.begin() + 1, m.end()};
}

double poisson_cdf_approx(const AhmadParams& params, double s_tilde) {
  if (!(params.p > 0.0)) throw DomainError("poisson_cdf_approx: p must be positive");
  if (!(params.alpha > 0.0)) throw DomainError("poisson_cdf_approx: alpha must be positive");
  if (params.lambda() > 0.1) {
    warn("poisson_cdf_approx: lambda = T p = " + std::to_string(params.lambda()) +
         " is outside the single-arrival regime (lambda <= 0.1)");
  }
  const double T = static_cast<double>(params.T);
  const double lifted = s_tilde * std::exp(T * params.alpha) - params.s0;
  if (!(lifted > 0.0)) throw DomainError("poisson_cdf_approx: s_tilde * e^{T alpha} must exceed s0");
  const double none = std::exp(-T * params.p);
  // below one decayed arrival only the no-arrival branch contributes
  if (lifted < 1.0) return std::min(1.0, none);
  const double value = none * (1.0 + params.p / params.alpha * std::log(lifted));
  return std::clamp(value, 0.0, 1.0);
}

double critical_threshold(const AhmadParams& params) {
  if (!(params.p > 0.0)) throw DomainError("critical_threshold: p must be positive");
  if (!(params.alpha > 0.0)) throw DomainError("critical_threshold: alpha must be positive");
  if (params.n < 2) throw InputError("critical_threshold: n must be at least 2");
  if (params.lambda() > 0.1) {
    warn("critical_threshold: lambda = T p = " + std::to_string(params.lambda()) +
         " is outside the single-arrival regime (lambda <= 0.1)");
  }
  const double T = static_cast<double>(params.T);
  const double n = static_cast<double>(params.n);
  const double exponent =
      params.alpha / params.p * (std::exp(T * params.p) * (1.0 - 1.0 / n) - 1.0) - T * params.alpha;
  return std::exp(exponent) + params.s0 * std::exp(-T * params.alpha);
}

std::vector<std::vector<double>> gcc_sweep_fractions(const AhmadParams& params,
                                                     std::span<const double> thresholds,
                                                     std::size_t realizations, std::uint64_t seed,
                                                     unsigned workers) {
  params.validate();
  for (double g : thresholds) {
    if (!(g >= 0.0)) throw InputError("gcc_sweep: thresholds must be non-negative");
  }
  std::vector<std::vector<double>> out(realizations, std::vector<double>(thresholds.size(), 0.0));
  if (thresholds.empty()) return out;

  const double g_min = *std::min_element(thresholds.begin(), thresholds.end());
  // visit thresholds from high to low so edges only ever get added
  std::vector<std::size_t> order(thresholds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return thresholds[a] > thresholds[b]; });

  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  const auto plus_one = [](double s) { return s + 1.0; };
  const std::size_t n = params.n;

  parallel_for(realizations, workers, [&](std::size_t r) {
    const StreamFamily family(seed, r);
    std::vector<WeightedEdge> ties;
    std::size_t idx = 0;
    for (std::size_t e = 0; e < n; ++e) {
      for (std::size_t f = e + 1; f < n; ++f, ++idx) {
        CounterRng rng = family.stream(idx);
        const double s = process.run(rng, params.s0, plus_one);
        if (s > 0.0 && s >= g_min) ties.push_back({s, static_cast<NodeId>(e), static_cast<NodeId>(f)});
      }
    }
    std::sort(ties.begin(), ties.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
      if (a.s != b.s) return a.s > b.s;
      return a.e != b.e ? a.e < b.e : a.f < b.f;
    });
    UnionFind uf(n);
    std::size_t next = 0;
    for (std::size_t k : order) {
      const double g = thresholds[k];
      while (next < ties.size() && ties[next].s >= g) {
        uf.unite(ties[next].e, ties[next].f);
        ++next;
      }
      out[r][k] = static_cast<double>(uf.largest()) / static_cast<double>(n);
    }
  });
  return out;
}

std::vector<SweepRow> gcc_sweep(const AhmadParams& params, std::span<const double> thresholds,
                                std::size_t realizations, std::uint64_t seed, unsigned workers) {
  if (realizations < 1) throw InputError("gcc_sweep: need at least one realization");
  const auto fractions = gcc_sweep_fractions(params, thresholds, realizations, seed, workers);
  std::vector<SweepRow> rows;
  rows.reserve(thresholds.size());
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    RunningStats stats;
    for (std::size_t r = 0; r < realizations; ++r) stats.add(fractions[r][k]);
    rows.push_back({thresholds[k], stats.mean(), stats.std_error()});
  }
  return rows;
}

std::vector<RunningStats> ensemble_stats(const AhmadParams& params, std::span<const std::uint64_t> checkpoints,
                                         std::size_t realizations, std::uint64_t seed, unsigned workers) {
  params.validate();
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw InputError("ensemble_stats: checkpoints must be sorted");
  }
  for (auto c : checkpoints) {
    if (c > params.T) throw InputError("ensemble_stats: checkpoint beyond T");
  }
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  const auto plus_one = [](double s) { return s + 1.0; };
  const std::size_t pairs = params.n * (params.n - 1) / 2;
  const std::size_t blocks = block_count(pairs);
  const std::size_t items = blocks * realizations;

  std::vector<std::vector<RunningStats>> partial(items, std::vector<RunningStats>(checkpoints.size()));
  parallel_for(items, workers, [&](std::size_t item) {
    const std::size_t r = item / blocks;
    const std::size_t b = item % blocks;
    const StreamFamily family(seed, r);
    std::vector<double> values(checkpoints.size());
    auto& stats = partial[item];
    const std::size_t end = std::min(pairs, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      CounterRng rng = family.stream(i);
      process.run(rng, params.s0, plus_one, checkpoints, values.data());
      for (std::size_t c = 0; c < values.size(); ++c) stats[c].add(values[c]);
    }
  });
  std::vector<RunningStats> total(checkpoints.size());
  for (const auto& part : partial) {
    for (std::size_t c = 0; c < total.size(); ++c) total[c].merge(part[c]);
  }
  return total;
}

std::uint64_t stationary_burn_in(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("stationary_burn_in: alpha must be positive");
  return std::max<std::uint64_t>(500, static_cast<std::uint64_t>(std::ceil(10.0 / alpha)));
}

std::vector<double> sample_edges(const AhmadParams& params, std::size_t count, std::uint64_t seed,
                                 unsigned workers) {
  params.validate();
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  const auto plus_one = [](double s) { return s + 1.0; };
  const StreamFamily family(seed, 0);
  std::vector<double> out(count);
  parallel_for(block_count(count), workers, [&](std::size_t b) {
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      CounterRng rng = family.stream(i);
      out[i] = process.run(rng, params.s0, plus_one);
    }
  });
  return out;
}

std::vector<double> edge_trace(const AhmadParams& params, std::uint64_t seed, std::uint64_t edge) {
  params.validate();
  const detail::EdgeProcess process(params.p, params.alpha, params.T);
  CounterRng rng(seed, 0, edge);
  std::vector<double> trace;
  const double alpha = params.alpha;
  process.run_stepwise(rng, params.s0, [alpha](double s, bool hit) { return step_edge(s, hit, alpha); }, &trace);
  return trace;
}

}  // namespace tiedecay
