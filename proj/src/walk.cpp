#include "tiedecay/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tiedecay/errors.hpp"
#include "tiedecay/parallel.hpp"
#include "tiedecay/rng.hpp"

namespace tiedecay {

namespace {

constexpr std::size_t kBlock = 1 << 14;
constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

std::int64_t snap(double ratio, const char* what) {
  const double r = std::round(ratio);
  if (std::abs(ratio - r) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw ConfigurationError(std::string(what) + " must be a whole number of lattice steps dx");
  }
  return static_cast<std::int64_t>(r);
}

struct Lattice {
  std::int64_t upper;
  std::int64_t lower;
  double a;  // up probability
};

std::int64_t lattice_step(std::int64_t j, const Lattice& lat, double coin) {
  if (coin < lat.a) return j < lat.upper ? j + 1 : lat.upper;
  return j > lat.lower ? j - 1 : lat.lower;
}

std::int64_t run_stepwise(CounterRng& rng, std::int64_t j, const Lattice& lat, std::uint64_t steps) {
  for (std::uint64_t t = 0; t < steps; ++t) j = lattice_step(j, lat, rng.uniform());
  return j;
}

double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

// Endpoint of a walk that is clamped at `upper` but never reaches `lower`.
// With y = upper - j the clamped walk is a Lindley recursion driven by +/-1
// steps; given U down-moves the step order is uniform, and the running
// minimum of the free walk follows from the reflection principle:
// P(H >= h | U) = C(T, U + h) / C(T, U) for h >= max(0, T - 2U).
std::int64_t run_path_count(CounterRng& rng, std::int64_t j0, const Lattice& lat, std::uint64_t steps) {
  const auto T = static_cast<std::int64_t>(steps);
  std::binomial_distribution<std::int64_t> downs(T, 1.0 - lat.a);
  if (lat.upper == kUnbounded) {
    const std::int64_t u = downs(rng);
    return j0 + (T - u) - u;
  }
  const std::int64_t y0 = lat.upper - j0;
  const std::int64_t u = downs(rng);
  const std::int64_t s = 2 * u - T;
  const std::int64_t h_min = std::max<std::int64_t>(0, -s);
  std::int64_t h = std::max(h_min, y0);
  // g tracks P(H >= h); P(max(H, y0) >= h) is 1 at the starting h
  double g = h > h_min ? std::exp(log_choose(T, u + h) - log_choose(T, u)) : 1.0;
  const double v = 1.0 - rng.uniform();  // (0, 1]
  for (int it = 0; it < 64; ++it) {
    if (u + h >= T) return lat.upper - (s + h);
    const double next = g * static_cast<double>(T - u - h) / static_cast<double>(u + h + 1);
    if (next < v) return lat.upper - (s + h);
    g = next;
    ++h;
  }
  // long overshoot (weak drift): bisect on log P(H >= h), which is decreasing
  const double log_v = std::log(v);
  const double base = log_choose(T, u);
  std::int64_t lo = h, hi = T - u;
  if (log_choose(T, u + hi) - base >= log_v) return lat.upper - (s + hi);
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (log_choose(T, u + mid) - base >= log_v) lo = mid;
    else hi = mid;
  }
  return lat.upper - (s + lo);
}

Lattice lattice_of(const WalkParams& params) {
  return {params.upper_index(), params.lower_index(), params.up_probability()};
}

}  // namespace

std::uint64_t WalkParams::steps() const {
  const double ratio = T / dt;
  const double r = std::round(ratio);
  if (std::abs(ratio - r) <= 1e-9 * std::max(1.0, ratio)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::floor(ratio));
}

std::int64_t WalkParams::upper_index() const {
  if (!bounded()) return kUnbounded;
  return snap(w / dx, "w");
}

std::int64_t WalkParams::lower_index() const {
  if (std::isinf(L)) return std::numeric_limits<std::int64_t>::min() / 2;
  return -static_cast<std::int64_t>(std::ceil(L / dx - 1e-9));
}

bool WalkParams::propagation_ok() const { return L >= minimum_L() * (1.0 - 1e-12); }

void WalkParams::validate() const {
  if (n < 2) throw ConfigurationError("walk: n must be at least 2");
  if (!(dx > 0.0)) throw ConfigurationError("walk: dx must be positive");
  if (!(dt > 0.0)) throw ConfigurationError("walk: dt must be positive");
  if (!(T >= 0.0)) throw ConfigurationError("walk: T must be non-negative");
  if (!(Delta >= 0.0 && Delta < 0.5)) throw ConfigurationError("walk: Delta must lie in [0, 1/2)");
  if (!(L > 0.0)) throw ConfigurationError("walk: L must be positive");
  if (bounded()) {
    if (!(w > 0.0)) throw ConfigurationError("walk: w must be positive");
    upper_index();
  }
}

WalkParams WalkParams::with_beta(double beta, double dx, double dt, double T, double w, double L) {
  WalkParams p;
  p.dx = dx;
  p.dt = dt;
  p.T = T;
  p.Delta = beta * dx;
  p.w = w;
  p.L = L;
  return p;
}

double walk_step(double x, const WalkParams& params, double coin) {
  if (x > params.w) throw InputError("walk_step: x lies above the upper bound w");
  if (coin < params.up_probability()) {
    const double up = x + params.dx;
    return up >= params.w ? params.w : up;
  }
  const double down = x - params.dx;
  const double floor = static_cast<double>(params.lower_index()) * params.dx;
  return down < floor - 1e-9 * params.dx ? x : down;
}

std::vector<std::int64_t> simulate_walk_indices(const WalkParams& params, std::size_t n_edges, std::uint64_t seed,
                                                const WalkOptions& options) {
  params.validate();
  const Lattice lat = lattice_of(params);
  const std::int64_t j0 = options.start_index;
  if (j0 > lat.upper || j0 < lat.lower) throw InputError("simulate_walk: start index outside the lattice");
  const std::uint64_t steps = params.steps();
  const bool lower_reachable = j0 - static_cast<std::int64_t>(std::min<std::uint64_t>(steps, 1ULL << 62)) < lat.lower;
  const bool exact = options.engine == WalkEngine::path_count && !lower_reachable;

  const StreamFamily family(seed, options.realization);
  std::vector<std::int64_t> out(n_edges);
  parallel_for((n_edges + kBlock - 1) / kBlock, options.workers, [&](std::size_t b) {
    const std::size_t end = std::min(n_edges, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      CounterRng rng = family.stream(i);
      out[i] = exact ? run_path_count(rng, j0, lat, steps) : run_stepwise(rng, j0, lat, steps);
    }
  });
  return out;
}

std::vector<double> simulate_walk(const WalkParams& params, std::size_t n_edges, std::uint64_t seed,
                                  const WalkOptions& options) {
  const auto idx = simulate_walk_indices(params, n_edges, seed, options);
  std::vector<double> x(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) x[i] = static_cast<double>(idx[i]) * params.dx;
  return x;
}

std::vector<double> walk_trace(const WalkParams& params, std::uint64_t seed, std::uint64_t edge) {
  params.validate();
  const Lattice lat = lattice_of(params);
  CounterRng rng(seed, 0, edge);
  const std::uint64_t steps = params.steps();
  std::vector<double> trace;
  trace.reserve(steps + 1);
  std::int64_t j = 0;
  trace.push_back(0.0);
  for (std::uint64_t t = 0; t < steps; ++t) {
    j = lattice_step(j, lat, rng.uniform());
    trace.push_back(static_cast<double>(j) * params.dx);
  }
  return trace;
}

std::vector<std::uint64_t> lattice_counts(const std::vector<std::int64_t>& indices, std::int64_t lower,
                                          std::int64_t upper) {
  if (upper < lower) throw InputError("lattice_counts: empty index range");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(upper - lower + 1), 0);
  for (auto j : indices) {
    if (j < lower || j > upper) throw InputError("lattice_counts: index outside range");
    ++counts[static_cast<std::size_t>(j - lower)];
  }
  return counts;
}

double gaussian_solution(double x, double t, double D) {
  if (!(t > 0.0)) throw DomainError("gaussian_solution: t must be positive");
  if (!(D > 0.0)) throw DomainError("gaussian_solution: D must be positive");
  return std::exp(-x * x / (4.0 * D * t)) / std::sqrt(4.0 * std::numbers::pi * D * t);
}

double stationary_density(double x, double beta, double w) {
  if (!(beta > 0.0)) throw DomainError("stationary_density: beta must be positive");
  if (x > w) throw InputError("stationary_density: x lies above w");
  return 4.0 * beta * std::exp(4.0 * beta * (x - w));
}

double adjacent_ratio(double Delta) { return (0.5 + Delta) / (0.5 - Delta); }

double stationary_boundary_value(const WalkParams& params) {
  params.validate();
  if (!params.bounded()) throw DomainError("stationary_boundary_value: needs a finite upper bound");
  const double eta = (0.5 - params.Delta) / (0.5 + params.Delta);
  const std::int64_t N = params.upper_index() - params.lower_index();
  if (params.Delta == 0.0) return 1.0 / (params.dx * static_cast<double>(N + 1));
  // sum_{j=0}^{N} u_N eta^j dx = 1
  const double tail = std::isinf(params.L) ? 0.0 : std::pow(eta, static_cast<double>(N + 1));
  return (1.0 - eta) / (params.dx * (1.0 - tail));
}

double stationary_density_discrete(std::int64_t j, const WalkParams& params) {
  const std::int64_t N = params.upper_index() - params.lower_index();
  if (j < 0 || j > N) throw InputError("stationary_density_discrete: offset outside the grid");
  const double eta = (0.5 - params.Delta) / (0.5 + params.Delta);
  return stationary_boundary_value(params) * std::pow(eta, static_cast<double>(j));
}

double gcc_probability_cd(double beta, double w, double w0) {
  if (w0 > w) throw DomainError("gcc_probability_cd: threshold w0 lies above w");
  if (!(beta > 0.0)) throw DomainError("gcc_probability_cd: beta must be positive");
  return -std::expm1(4.0 * beta * (w0 - w));
}

double no_gcc_delta_bound(std::size_t n) {
  if (n < 1) throw InputError("no_gcc_delta_bound: n must be positive");
  return 1.0 / (4.0 * static_cast<double>(n) - 2.0);
}

Timescales timescales(double beta, double k, double w) {
  if (!(beta > 0.0 && k > 0.0 && w > 0.0)) throw DomainError("timescales: beta, k and w must be positive");
  Timescales ts;
  ts.tau1 = w / (4.0 * beta * k);
  ts.tau2 = w * w / (2.0 * k);
  ts.tau = std::max(ts.tau1, ts.tau2);
  ts.peclet = 4.0 * beta * w;
  return ts;
}

Timescales timescales(const WalkParams& params) { return timescales(params.beta(), params.k(), params.w); }

double stationarity_time(const WalkParams& params) { return 5.0 * timescales(params).tau; }

}  // namespace tiedecay
