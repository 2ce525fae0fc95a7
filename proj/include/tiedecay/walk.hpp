#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace tiedecay {

// Multiplicative random walk of tie strengths, simulated in log strength
// x = ln(s) on the lattice x = j * dx. Each time step dt the walk moves up
// with probability 1/2 + Delta and down otherwise. The upper bound w is hard
// (up-moves at or past w land on w); -L only bounds storage.
struct WalkParams {
  std::size_t n = 2;
  double dx = 5e-3;
  double dt = 1e-5;
  double T = 0.0;
  double Delta = 0.0;
  double w = std::numeric_limits<double>::infinity();
  double L = 1.0;

  double beta() const { return Delta / dx; }
  double k() const { return dx * dx / (2.0 * dt); }
  double v() const { return dx / dt; }
  double up_probability() const { return 0.5 + Delta; }
  bool bounded() const { return w != std::numeric_limits<double>::infinity(); }

  std::uint64_t steps() const;
  std::int64_t upper_index() const;  // w / dx; int64 max when unbounded
  std::int64_t lower_index() const;  // -ceil(L / dx)
  // Walks started at x = 0 cannot reach -L within T: L >= v T.
  bool propagation_ok() const;
  double minimum_L() const { return v() * T; }

  void validate() const;  // throws ConfigurationError

  static WalkParams with_beta(double beta, double dx, double dt, double T, double w, double L);
};

// One step of the walk from x. `coin` in [0, 1): below 1/2 + Delta moves up.
double walk_step(double x, const WalkParams& params, double coin);

enum class WalkEngine {
  stepwise,    // one draw per time step
  path_count,  // exact endpoint law in O(1) draws (falls back to stepwise if -L is reachable)
};

struct WalkOptions {
  WalkEngine engine = WalkEngine::path_count;
  std::int64_t start_index = 0;
  std::uint64_t realization = 0;
  unsigned workers = 1;
};

// Final lattice indices of n_edges independent walks after steps() steps.
std::vector<std::int64_t> simulate_walk_indices(const WalkParams& params, std::size_t n_edges, std::uint64_t seed,
                                                const WalkOptions& options = {});

// Final log strengths x = j * dx.
std::vector<double> simulate_walk(const WalkParams& params, std::size_t n_edges, std::uint64_t seed,
                                  const WalkOptions& options = {});

// Log strength of one edge at each time step, step by step.
std::vector<double> walk_trace(const WalkParams& params, std::uint64_t seed, std::uint64_t edge = 0);

// Counts per lattice index in [lower, upper].
std::vector<std::uint64_t> lattice_counts(const std::vector<std::int64_t>& indices, std::int64_t lower,
                                          std::int64_t upper);

// (4 pi D t)^{-1/2} exp(-x^2 / (4 D t))
double gaussian_solution(double x, double t, double D);

// 4 beta exp(4 beta (x - w)) for x <= w.
double stationary_density(double x, double beta, double w);

// Stationary lattice density at j steps below the upper bound, normalized to
// unit mass on the params grid: u_N eta^j with eta = (1/2 - Delta)/(1/2 + Delta).
double stationary_density_discrete(std::int64_t j, const WalkParams& params);
double stationary_boundary_value(const WalkParams& params);
double adjacent_ratio(double Delta);

// P(x > w0) at stationarity: 1 - exp(4 beta (w0 - w)).
double gcc_probability_cd(double beta, double w, double w0);

// Necessary condition for no GCC: Delta < 1 / (4n - 2).
double no_gcc_delta_bound(std::size_t n);

struct Timescales {
  double tau1 = 0.0;  // w / (4 beta k)
  double tau2 = 0.0;  // w^2 / (2 k)
  double tau = 0.0;
  double peclet = 0.0;  // 4 beta w
};

Timescales timescales(double beta, double k, double w);
Timescales timescales(const WalkParams& params);

// 5 tau: time after which the walk is treated as stationary.
double stationarity_time(const WalkParams& params);

}  // namespace tiedecay
