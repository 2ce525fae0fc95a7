#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tiedecay/graph.hpp"
#include "tiedecay/stats.hpp"

namespace tiedecay {

// Tie-decay network G(n, p, alpha, T) with unit time step: each step a pair
// interacts with probability p (strength + 1), otherwise its strength decays
// by sigma = exp(-alpha).
struct AhmadParams {
  std::size_t n = 2;
  double p = 0.0;
  double alpha = 1.0;
  std::uint64_t T = 0;
  double s0 = 0.0;

  double sigma() const;
  double lambda() const { return static_cast<double>(T) * p; }
  void validate() const;  // throws InputError
};

double step_edge(double s, bool interacted, double alpha);

// Full network after T steps. Pair (e, f) of realization r draws from its own
// stream keyed by (seed, r, pair index).
TieMatrix simulate(const AhmadParams& params, std::uint64_t seed, std::uint64_t realization = 0,
                   unsigned workers = 1);

// sum_{i=1}^{t} sum_{j=0}^{t-i} p^i e^{-j alpha}
double mean_finite_time(const AhmadParams& params, std::uint64_t t);

// p / ((1 - sigma)(1 - p)); DomainError for p >= 1 or alpha <= 0.
double mean_stationary(double p, double alpha);
double variance_stationary(double p, double alpha);

// Raw moments m_1..m_{n_max} of the stationary strength.
std::vector<double> raw_moments_stationary(double p, double alpha, int n_max);

// P(s_T <= s_tilde) assuming at most one interaction in the run.
double poisson_cdf_approx(const AhmadParams& params, double s_tilde);

// Threshold below which the single-arrival approximation predicts a GCC.
double critical_threshold(const AhmadParams& params);

struct SweepRow {
  double x = 0.0;
  double mean_fraction = 0.0;
  double std_error = 0.0;
};

// Mean largest-component fraction per threshold (at-least mode; pairs that
// never interacted carry no tie). Rows follow the order of `thresholds`.
std::vector<SweepRow> gcc_sweep(const AhmadParams& params, std::span<const double> thresholds,
                                std::size_t realizations, std::uint64_t seed, unsigned workers = 1);

// Per-realization largest fractions behind gcc_sweep: result[r][i] for
// thresholds[i].
std::vector<std::vector<double>> gcc_sweep_fractions(const AhmadParams& params,
                                                     std::span<const double> thresholds,
                                                     std::size_t realizations, std::uint64_t seed,
                                                     unsigned workers = 1);

// Statistics of edge strengths at each checkpoint, pooled over all pairs of
// `realizations` networks. Uses the same streams as simulate().
std::vector<RunningStats> ensemble_stats(const AhmadParams& params, std::span<const std::uint64_t> checkpoints,
                                         std::size_t realizations, std::uint64_t seed, unsigned workers = 1);

// Burn-in length used for stationary samples: max(500, ceil(10 / alpha)).
std::uint64_t stationary_burn_in(double alpha);

// `count` independent edge strengths after params.T steps.
std::vector<double> sample_edges(const AhmadParams& params, std::size_t count, std::uint64_t seed,
                                 unsigned workers = 1);

// Strength of one pair at t = 0..T, simulated one step at a time.
std::vector<double> edge_trace(const AhmadParams& params, std::uint64_t seed, std::uint64_t edge = 0);

}  // namespace tiedecay
