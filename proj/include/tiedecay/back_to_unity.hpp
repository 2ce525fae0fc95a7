#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tiedecay/ahmad.hpp"
#include "tiedecay/graph.hpp"

namespace tiedecay {

// Back-to-unity model: an interaction resets the strength to 1, otherwise it
// decays by exp(-alpha). Pairs start at zero strength.
struct BackToUnityParams {
  std::size_t n = 2;
  double p = 0.0;
  double alpha = 1.0;
  std::uint64_t T = 0;
  double g = 1.0;

  // Number of decay steps a freshly reset tie stays at or above g:
  // ceil(-ln(g) / alpha).
  std::uint64_t q() const;
  void validate() const;  // throws InputError
};

std::uint64_t steps_above(double alpha, double g);

double step_edge_b2u(double s, bool interacted, double alpha);

// E[s^order] at stationarity: p / (1 - sigma^order (1 - p)).
double moment_stationary_b2u(double p, double alpha, int order);

// P(s >= g) at stationarity: 1 - (1 - p)^q.
double prob_active(double p, double alpha, double g);

bool gcc_predicted(std::size_t n, double p, double alpha, double g);

// Exact inverse of prob_active at 1/n; DomainError for g = 1.
double critical_p(std::size_t n, double alpha, double g);
// Small-p approximation 1 / (n q).
double critical_p_approx(std::size_t n, double alpha, double g);

TieMatrix simulate_b2u(const BackToUnityParams& params, std::uint64_t seed, std::uint64_t realization = 0,
                       unsigned workers = 1);

// Mean largest fraction per interaction probability (params.p is ignored).
// Every p value reuses the same per-pair streams, so neighbouring rows are
// positively correlated and the curve is smooth in p.
std::vector<SweepRow> gcc_sweep_b2u(const BackToUnityParams& params, std::span<const double> p_grid,
                                    std::size_t realizations, std::uint64_t seed, unsigned workers = 1);

// Largest fraction of each realization at params.p.
std::vector<double> gcc_fractions_b2u(const BackToUnityParams& params, std::size_t realizations,
                                      std::uint64_t seed, unsigned workers = 1);

// `count` independent edge strengths after params.T steps.
std::vector<double> sample_edges_b2u(const BackToUnityParams& params, std::size_t count, std::uint64_t seed,
                                     unsigned workers = 1);

std::vector<double> edge_trace_b2u(const BackToUnityParams& params, std::uint64_t seed, std::uint64_t edge = 0);

}  // namespace tiedecay
