#include "tiedecay/experiments/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "tiedecay/ahmad.hpp"
#include "tiedecay/back_to_unity.hpp"
#include "tiedecay/epidemics.hpp"
#include "tiedecay/errors.hpp"
#include "tiedecay/experiments/csv.hpp"
#include "tiedecay/fd_solver.hpp"
#include "tiedecay/graph.hpp"
#include "tiedecay/stats.hpp"
#include "tiedecay/walk.hpp"

#ifndef TIEDECAY_VERSION
#define TIEDECAY_VERSION "0.0.0"
#endif

namespace tiedecay::experiments {

namespace {

using OJson = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Checks {
 public:
  void add(std::string field, std::string message) { found_.push_back({std::move(field), std::move(message)}); }
  bool ok() const { return found_.empty(); }
  const std::vector<Violation>& found() const { return found_; }

  // Runs fn and records any configuration or parameter error it throws.
  // Returns false if something was recorded.
  template <class F>
  bool guard(const std::string& field, F&& fn) {
    try {
      fn();
      return true;
    } catch (const ConfigError& e) {
      add(e.field(), message_of(e));
    } catch (const InputError& e) {
      add(field, e.what());
    } catch (const DomainError& e) {
      add(field, e.what());
    } catch (const ConfigurationError& e) {
      add(field, e.what());
    }
    return false;
  }

 private:
  static std::string message_of(const ConfigError& e) {
    const std::string what = e.what();
    const std::string prefix = e.field() + ": ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
  }
  std::vector<Violation> found_;
};

struct Output {
  std::string table;
  Table data;
  OJson derived = OJson::object();
};

struct Job {
  const ExperimentConfig& cfg;
  Block model;
  Block sweep;
  Checks checks;
  bool dry;

  Job(const ExperimentConfig& c, bool dry_run) : cfg(c), model(c.model, "model"), sweep(c.sweep, "sweep"), dry(dry_run) {}

  bool skip() const { return dry || !checks.ok(); }

  void single_realization() {
    if (cfg.realizations != 1) checks.add("realizations", "must be 1 for this experiment");
  }
};

std::int64_t as_i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

// ---- shared parameter blocks -------------------------------------------

AhmadParams ahmad_from(Job& job, bool need_n) {
  AhmadParams p;
  job.checks.guard("model", [&] {
    p.n = need_n ? job.model.integer("n") : 2;
    p.p = job.model.number("p");
    p.alpha = job.model.number("alpha");
    p.T = job.model.integer("T");
    p.s0 = job.model.number_or("s0", 0.0);
    p.validate();
  });
  return p;
}

// n, p, alpha and T; g is set by the caller.
BackToUnityParams b2u_from(Job& job, bool need_n) {
  BackToUnityParams p;
  job.checks.guard("model", [&] {
    p.n = need_n ? job.model.integer("n") : 2;
    p.p = job.model.number("p");
    p.alpha = job.model.number("alpha");
    p.T = job.model.integer("T");
  });
  return p;
}

// dx, dt, T, Delta or beta, w and L. `need_time` is false for the stationary
// solver, which has no horizon.
WalkParams walk_from(Job& job, bool need_time, bool need_n) {
  WalkParams p;
  const Block& m = job.model;
  const bool fields_ok = job.checks.guard("model", [&] {
    p.dx = m.number("dx");
    p.dt = need_time ? m.number("dt") : m.number_or("dt", 1.0);
    p.T = need_time ? m.number("T") : 0.0;
    p.w = m.number_or("w", std::numeric_limits<double>::infinity());
    p.L = m.number("L");
    if (need_n) p.n = m.integer("n");
    if (m.has("beta") && m.has("Delta")) throw ConfigError(m.field("beta"), "give either beta or Delta, not both");
    p.Delta = m.has("beta") ? m.number("beta") * p.dx : m.number_or("Delta", 0.0);
  });
  if (!fields_ok) return p;
  if (!(p.Delta >= 0.0 && p.Delta < 0.5)) {
    job.checks.add(m.field(m.has("beta") ? "beta" : "Delta"),
                   fmt::format("Delta = {} violates 0 <= Delta < 1/2 (Delta = beta dx)", p.Delta));
    return p;
  }
  if (!job.checks.guard("model", [&] { p.validate(); })) return p;
  if (need_time && !p.propagation_ok()) {
    const double suggested = std::ceil(p.minimum_L() / p.dx - 1e-9) * p.dx;  // whole lattice steps
    job.checks.add(m.field("L"), fmt::format("L = {} is below v T = {} so walks can reach -L; suggested minimum L = {}",
                                             p.L, p.minimum_L(), suggested));
  }
  return p;
}

SchemeCoeffs scheme_from(Job& job, const WalkParams& walk) {
  SchemeCoeffs co;
  if (!job.checks.ok()) return co;
  if (job.model.has("k")) {
    double k = 0.0;
    if (!job.checks.guard("model", [&] { k = job.model.number("k"); })) return co;
    co = SchemeCoeffs::from_physical(k, walk.beta(), walk.dt, walk.dx);
  } else {
    co = SchemeCoeffs::from_bias(walk.Delta);
  }
  const std::pair<const char*, double> named[] = {{"a", co.a}, {"b", co.b}, {"c", co.c}};
  for (const auto& [name, value] : named) {
    if (value < 0.0) {
      job.checks.add(job.model.field("k"), fmt::format("scheme coefficient {} = {} is negative; need a, b, c >= 0 "
                                                       "(k dt / dx^2 <= 1/2 and 2 beta dx <= 1)",
                                                       name, value));
    }
  }
  return co;
}

Grid grid_from(Job& job, const WalkParams& walk) {
  Grid g;
  if (!job.checks.ok()) return g;
  if (!walk.bounded()) {
    job.checks.add(job.model.field("w"), "the finite-difference grid needs a finite upper bound w");
    return g;
  }
  job.checks.guard("model", [&] { g = Grid::from_walk(walk); });
  if (job.checks.ok() && (0 < g.lower || 0 > g.upper())) {
    job.checks.add(job.model.field("w"), "x = 0 must lie on the grid [-L, w]");
  }
  return g;
}

std::uint64_t edges_from(Job& job) {
  std::uint64_t edges = 1;
  job.checks.guard("sweep", [&] {
    edges = job.sweep.integer_or("edges", 1);
    if (edges < 1) throw ConfigError(job.sweep.field("edges"), "must be at least 1");
  });
  return edges;
}

// ---- experiments ---------------------------------------------------------

std::vector<Output> ahmad_trace(Job& job) {
  job.model.only({"p", "alpha", "T", "s0"});
  job.sweep.only({"edges"});
  job.single_realization();
  const AhmadParams p = ahmad_from(job, false);
  const std::uint64_t edges = edges_from(job);
  if (job.skip()) return {};
  Output out{"main", {{"edge", "t", "strength"}, {}}, {{"sigma", p.sigma()}}};
  for (std::uint64_t e = 0; e < edges; ++e) {
    const auto trace = edge_trace(p, job.cfg.seed, e);
    for (std::size_t t = 0; t < trace.size(); ++t) out.data.add({as_i64(e), static_cast<std::int64_t>(t), trace[t]});
  }
  return {out};
}

std::vector<Output> ahmad_moments(Job& job) {
  job.model.only({"n", "p", "alpha"});
  job.sweep.only({"t"});
  AhmadParams p;
  std::vector<std::uint64_t> checkpoints;
  job.checks.guard("model", [&] {
    p.n = job.model.integer("n");
    p.p = job.model.number("p");
    p.alpha = job.model.number("alpha");
    for (double t : job.sweep.numbers("t")) {
      if (!(t >= 1.0 && std::floor(t) == t)) throw ConfigError(job.sweep.field("t"), "times must be positive integers");
      checkpoints.push_back(static_cast<std::uint64_t>(t));
    }
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
        std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end()) {
      throw ConfigError(job.sweep.field("t"), "times must be strictly increasing");
    }
    p.T = checkpoints.back();
    p.validate();
  });
  if (job.skip()) return {};
  const auto stats = ensemble_stats(p, checkpoints, job.cfg.realizations, job.cfg.seed, job.cfg.workers);
  const double stationary = mean_stationary(p.p, p.alpha);
  Output out{"main",
             {{"t", "analytic_mean", "mc_mean", "mc_std_error", "mc_variance", "stationary_mean"}, {}},
             {{"stationary_mean", stationary}, {"stationary_variance", variance_stationary(p.p, p.alpha)}}};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    out.data.add({as_i64(checkpoints[i]), mean_finite_time(p, checkpoints[i]), stats[i].mean(), stats[i].std_error(),
                  stats[i].variance(), stationary});
  }
  return {out};
}

std::vector<Output> ahmad_gcc(Job& job) {
  job.model.only({"n", "p", "alpha", "T"});
  job.sweep.only({"g"});
  AhmadParams p;
  std::vector<double> alphas, thresholds;
  job.checks.guard("model", [&] {
    p.n = job.model.integer("n");
    p.p = job.model.number("p");
    p.T = job.model.integer("T");
    alphas = job.model.numbers("alpha");
    thresholds = job.sweep.grid("g");
    for (double a : alphas) {
      p.alpha = a;
      p.validate();
    }
  });
  if (job.skip()) return {};
  Output out{"main", {{"alpha", "g", "mean_fraction", "std_error"}, {}}};
  OJson g_crit = OJson::array();
  for (double a : alphas) {
    p.alpha = a;
    double crit = kNaN;
    try {
      crit = critical_threshold(p);
    } catch (const DomainError&) {
    }
    g_crit.push_back(crit);
    for (const auto& row : gcc_sweep(p, thresholds, job.cfg.realizations, job.cfg.seed, job.cfg.workers)) {
      out.data.add({a, row.x, row.mean_fraction, row.std_error});
    }
  }
  out.derived["g_crit"] = g_crit;
  return {out};
}

std::vector<Output> b2u_trace(Job& job) {
  job.model.only({"p", "alpha", "T"});
  job.sweep.only({"edges"});
  job.single_realization();
  BackToUnityParams p = b2u_from(job, false);
  job.checks.guard("model", [&] { p.validate(); });
  const std::uint64_t edges = edges_from(job);
  if (job.skip()) return {};
  Output out{"main", {{"edge", "t", "strength"}, {}}};
  for (std::uint64_t e = 0; e < edges; ++e) {
    const auto trace = edge_trace_b2u(p, job.cfg.seed, e);
    for (std::size_t t = 0; t < trace.size(); ++t) out.data.add({as_i64(e), static_cast<std::int64_t>(t), trace[t]});
  }
  return {out};
}

std::vector<Output> b2u_gcc_sweep(Job& job) {
  job.model.only({"n", "alpha", "g", "T"});
  job.sweep.only({"p"});
  BackToUnityParams p;
  std::vector<double> alphas, p_grid;
  job.checks.guard("model", [&] {
    p.n = job.model.integer("n");
    p.g = job.model.number("g");
    p.T = job.model.integer("T");
    alphas = job.model.numbers("alpha");
    p_grid = job.sweep.grid("p");
    for (double a : alphas) {
      p.alpha = a;
      for (double q : p_grid) {
        p.p = q;
        p.validate();
      }
    }
  });
  if (job.skip()) return {};
  Output out{"main", {{"alpha", "p", "mean_fraction", "std_error", "prob_active"}, {}}};
  OJson p_crit = OJson::array(), p_crit_approx = OJson::array();
  for (double a : alphas) {
    p.alpha = a;
    double crit = kNaN;
    try {
      crit = critical_p(p.n, a, p.g);
    } catch (const DomainError&) {
    }
    p_crit.push_back(crit);
    p_crit_approx.push_back(critical_p_approx(p.n, a, p.g));
    const auto rows = gcc_sweep_b2u(p, p_grid, job.cfg.realizations, job.cfg.seed, job.cfg.workers);
    for (const auto& row : rows) out.data.add({a, row.x, row.mean_fraction, row.std_error, prob_active(row.x, a, p.g)});
  }
  out.derived["p_crit"] = p_crit;
  out.derived["p_crit_approx"] = p_crit_approx;
  return {out};
}

std::vector<Output> b2u_components(Job& job) {
  job.model.only({"n", "p", "alpha", "T", "g"});
  job.single_realization();
  BackToUnityParams p = b2u_from(job, true);
  std::vector<double> thresholds;
  job.checks.guard("model", [&] {
    thresholds = job.model.numbers("g");
    for (double g : thresholds) {
      p.g = g;
      p.validate();
    }
  });
  if (job.skip()) return {};
  const TieMatrix m = simulate_b2u(p, job.cfg.seed, 0, job.cfg.workers);
  Output nodes{"nodes", {{"g", "node", "component", "component_size"}, {}}};
  Output edges{"edges", {{"g", "source", "target", "strength"}, {}}};
  OJson active = OJson::array(), largest = OJson::array();
  for (double g : thresholds) {
    const auto list = threshold_edges(m, Threshold{g}, ThresholdMode::at_least);
    const auto labels = component_labels(p.n, list);
    std::map<NodeId, std::int64_t> sizes;
    for (NodeId l : labels) ++sizes[l];
    for (std::size_t v = 0; v < labels.size(); ++v) {
      nodes.data.add({g, static_cast<std::int64_t>(v), static_cast<std::int64_t>(labels[v]), sizes[labels[v]]});
    }
    for (const auto& e : list) {
      edges.data.add({g, static_cast<std::int64_t>(e.first), static_cast<std::int64_t>(e.second), m(e.first, e.second)});
    }
    std::int64_t biggest = 0;
    for (const auto& [label, size] : sizes) biggest = std::max(biggest, size);
    active.push_back(prob_active(p.p, p.alpha, g));
    largest.push_back(static_cast<double>(biggest) / static_cast<double>(p.n));
  }
  nodes.derived["prob_active"] = active;
  nodes.derived["largest_fraction"] = largest;
  edges.derived = nodes.derived;
  return {nodes, edges};
}

std::vector<Output> walk_trace_exp(Job& job) {
  job.model.only({"dx", "dt", "T", "beta", "Delta", "w", "L"});
  job.sweep.only({"edges"});
  job.single_realization();
  const WalkParams p = walk_from(job, true, false);
  const std::uint64_t edges = edges_from(job);
  if (job.skip()) return {};
  Output out{"main", {{"edge", "t", "x"}, {}}, {{"steps", p.steps()}, {"k", p.k()}, {"beta", p.beta()}}};
  for (std::uint64_t e = 0; e < edges; ++e) {
    const auto trace = walk_trace(p, job.cfg.seed, e);
    for (std::size_t t = 0; t < trace.size(); ++t) {
      out.data.add({as_i64(e), static_cast<double>(t) * p.dt, trace[t]});
    }
  }
  return {out};
}

std::vector<Output> walk_stationary(Job& job) {
  job.model.only({"dx", "dt", "T", "beta", "Delta", "w", "L", "n", "engine"});
  job.sweep.only({"bin_sites"});
  const WalkParams p = walk_from(job, true, true);
  WalkEngine engine = WalkEngine::path_count;
  std::uint64_t bin = 1;
  job.checks.guard("model", [&] {
    const std::string name = job.model.text_or("engine", "path_count");
    if (name == "stepwise") engine = WalkEngine::stepwise;
    else if (name != "path_count") throw ConfigError(job.model.field("engine"), "must be 'path_count' or 'stepwise'");
    bin = job.sweep.integer_or("bin_sites", 1);
    if (bin < 1) throw ConfigError(job.sweep.field("bin_sites"), "must be at least 1");
  });
  if (job.skip()) return {};

  const auto steps = static_cast<std::int64_t>(p.steps());
  const std::int64_t lo = std::max(p.lower_index(), -steps);
  const std::int64_t hi = p.bounded() ? p.upper_index() : steps;
  const std::size_t bins = static_cast<std::size_t>((hi - lo) / static_cast<std::int64_t>(bin)) + 1;
  const std::size_t per_realization = p.n * (p.n - 1) / 2;
  const double bin_width = static_cast<double>(bin) * p.dx;

  std::vector<RunningStats> density(bins);
  std::vector<std::uint64_t> total(bins, 0);
  for (std::size_t r = 0; r < job.cfg.realizations; ++r) {
    WalkOptions opt;
    opt.engine = engine;
    opt.realization = r;
    opt.workers = job.cfg.workers;
    const auto idx = simulate_walk_indices(p, per_realization, job.cfg.seed, opt);
    std::vector<std::uint64_t> counts(bins, 0);
    for (auto j : idx) ++counts[static_cast<std::size_t>((j - lo) / static_cast<std::int64_t>(bin))];
    for (std::size_t b = 0; b < bins; ++b) {
      total[b] += counts[b];
      density[b].add(static_cast<double>(counts[b]) / (static_cast<double>(per_realization) * bin_width));
    }
  }
  std::size_t first = 0, last = bins;
  while (first < bins && total[first] == 0) ++first;
  while (last > first && total[last - 1] == 0) --last;

  const bool stationary_form = p.bounded() && p.Delta > 0.0;
  const bool gaussian_form = !p.bounded() && p.Delta == 0.0 && p.T > 0.0;
  Output out{"main",
             {{"x", "count", "density", "std_error", "analytic"}, {}},
             {{"steps", p.steps()}, {"walkers_per_realization", per_realization}, {"k", p.k()}, {"beta", p.beta()}}};
  for (std::size_t b = first; b < last; ++b) {
    const std::int64_t j0 = lo + static_cast<std::int64_t>(b * bin);
    const std::int64_t j1 = std::min(hi, j0 + static_cast<std::int64_t>(bin) - 1);
    const double x = 0.5 * static_cast<double>(j0 + j1) * p.dx;
    const double analytic = stationary_form ? stationary_density(x, p.beta(), p.w)
                            : gaussian_form ? gaussian_solution(x, p.T, p.k())
                                            : kNaN;
    out.data.add({x, static_cast<std::int64_t>(total[b]), density[b].mean(), density[b].std_error(), analytic});
  }
  return {out};
}

BoundaryRule boundary_from(Job& job, const WalkParams& walk) {
  BoundaryRule rule = BoundaryRule::mass_conserving;
  job.checks.guard("model", [&] {
    const std::string name = job.model.text_or("boundary", "mass_conserving");
    if (name == "flux_ratio") rule = BoundaryRule::flux_ratio;
    else if (name != "mass_conserving") {
      throw ConfigError(job.model.field("boundary"), "must be 'mass_conserving' or 'flux_ratio'");
    }
  });
  if (rule == BoundaryRule::flux_ratio && walk.Delta >= 0.25) {
    job.checks.add(job.model.field("boundary"), "flux_ratio needs Delta < 1/4");
  }
  return rule;
}

std::vector<Output> fd_evolve(Job& job) {
  job.model.only({"dx", "dt", "T", "beta", "Delta", "w", "L", "k", "boundary"});
  job.sweep.only({"t"});
  job.single_realization();
  const WalkParams walk = walk_from(job, true, false);
  const BoundaryRule rule = boundary_from(job, walk);
  const SchemeCoeffs co = scheme_from(job, walk);
  const Grid grid = grid_from(job, walk);
  std::vector<std::uint64_t> snapshots;
  if (job.checks.ok()) {
    job.checks.guard("sweep", [&] {
      const std::vector<double> times = job.sweep.has("t") ? job.sweep.numbers("t") : std::vector<double>{walk.T};
      for (double t : times) {
        WalkParams at = walk;
        at.T = t;
        if (!(t >= 0.0 && t <= walk.T * (1.0 + 1e-12))) throw ConfigError(job.sweep.field("t"), "times must lie in [0, T]");
        snapshots.push_back(at.steps());
      }
      if (!std::is_sorted(snapshots.begin(), snapshots.end())) {
        throw ConfigError(job.sweep.field("t"), "times must be non-decreasing");
      }
    });
  }
  if (job.skip()) return {};

  Output out{"main", {{"t", "x", "u"}, {}}};
  EvolveResult state{Field::delta(grid, 0), 0.0};
  double drift = 0.0;
  for (std::uint64_t target : snapshots) {
    const EvolveResult next = evolve(state.field, co, target - state.field.step, rule);
    drift = std::max(drift, next.max_mass_drift);
    state = next;
    for (std::size_t j = 0; j < grid.points(); ++j) {
      out.data.add({static_cast<double>(target) * walk.dt, grid.x(j), state.field.u[j]});
    }
  }
  out.derived = {{"a", co.a},       {"b", co.b}, {"c", co.c}, {"points", grid.points()}, {"steps", snapshots.back()},
                 {"max_mass_drift", drift}};
  return {out};
}

std::vector<Output> fd_stationary(Job& job) {
  job.model.only({"dx", "dt", "beta", "Delta", "w", "L", "k", "backend", "tolerance", "max_iterations"});
  job.single_realization();
  const WalkParams walk = walk_from(job, false, false);
  const SchemeCoeffs co = scheme_from(job, walk);
  const Grid grid = grid_from(job, walk);
  StationaryOptions opt;
  job.checks.guard("model", [&] {
    const std::string name = job.model.text_or("backend", "power");
    if (name == "direct") opt.backend = StationaryBackend::direct;
    else if (name != "power") throw ConfigError(job.model.field("backend"), "must be 'power' or 'direct'");
    opt.tolerance = job.model.number_or("tolerance", opt.tolerance);
    opt.max_iterations = job.model.integer_or("max_iterations", opt.max_iterations);
    if (!(opt.tolerance > 0.0)) throw ConfigError(job.model.field("tolerance"), "must be positive");
  });
  if (job.checks.ok() && !(co.a > 0.0 && co.c > 0.0)) {
    job.checks.add("model", "the stationary solver needs a > 0 and c > 0");
  }
  if (job.skip()) return {};

  const TridiagonalOperator m = build_transition_matrix(grid, co);
  const StationaryResult res = stationary_state(m, opt);
  // exact discrete state: u_j proportional to (a / c)^j
  const double eta = co.c / co.a;
  const double u_top = eta == 1.0 ? 1.0 / (grid.dx * static_cast<double>(grid.points()))
                                  : (1.0 - eta) / (grid.dx * (1.0 - std::pow(eta, static_cast<double>(grid.N + 1))));
  Output out{"main", {{"x", "u", "discrete_exact", "continuous"}, {}}};
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double exact = u_top * std::pow(eta, static_cast<double>(grid.N - j));
    const double continuous = walk.beta() > 0.0 ? stationary_density(grid.x(j), walk.beta(), walk.w) : kNaN;
    out.data.add({grid.x(j), res.field.u[j], exact, continuous});
  }
  out.derived = {{"boundary_value", res.field.u.back()},
                 {"boundary_value_exact", u_top},
                 {"boundary_value_continuous", 4.0 * walk.beta()},
                 {"adjacent_ratio", co.a / co.c},
                 {"residual", res.residual},
                 {"iterations", res.iterations},
                 {"points", grid.points()}};
  return {out};
}

std::vector<Output> sir_compare_exp(Job& job) {
  job.model.only({"beta_bar", "gamma_bar", "population", "S0", "I0", "R0", "steps"});
  job.sweep.only({"lambda"});
  SirParams p;
  SirCounts initial;
  std::uint64_t steps = 0;
  std::vector<double> lambdas;
  job.checks.guard("model", [&] {
    p.beta_bar = job.model.number("beta_bar");
    p.gamma_bar = job.model.number("gamma_bar");
    p.population = job.model.integer("population");
    initial.S = as_i64(job.model.integer("S0"));
    initial.I = as_i64(job.model.integer("I0"));
    initial.R = as_i64(job.model.integer_or("R0", 0));
    steps = job.model.integer("steps");
    lambdas = job.sweep.numbers("lambda");
    p.validate();
    if (initial.S + initial.I + initial.R != as_i64(p.population)) {
      throw ConfigError(job.model.field("S0"), "S0 + I0 + R0 must equal the population");
    }
    for (double l : lambdas) {
      if (!(l >= 0.0 && l <= static_cast<double>(p.population))) {
        throw ConfigError(job.sweep.field("lambda"), "lambda must lie in [0, population]");
      }
    }
  });
  if (job.skip()) return {};

  const auto cmp = sir_compare(lambdas, p, initial, steps, job.cfg.realizations, job.cfg.seed, job.cfg.workers);
  Output main{"main",
              {{"lambda", "t", "S", "I", "R", "S_std_error", "I_std_error", "R_std_error", "discrete_S", "discrete_I",
                "discrete_R"},
               {}}};
  Output summary{"summary",
                 {{"lambda", "p_active", "peak_time", "peak_time_std_error", "attack_rate", "attack_rate_std_error",
                   "discrete_peak_time", "discrete_attack_rate"},
                  {}}};
  const double N = static_cast<double>(p.population);
  const auto discrete_peak = static_cast<std::int64_t>(peak_time(cmp.discrete));
  const double discrete_attack = 1.0 - cmp.discrete.back().S / N;
  for (const auto& e : cmp.ensembles) {
    for (std::size_t t = 0; t <= steps; ++t) {
      const auto& m = e.mean[t];
      const auto& s = e.std_error[t];
      const auto& d = cmp.discrete[t];
      main.data.add({e.lambda, static_cast<std::int64_t>(t), m.S, m.I, m.R, s.S, s.I, s.R, d.S, d.I, d.R});
    }
    const auto peak = mean_stderr(e.peak_times);
    const auto attack = mean_stderr(e.attack_rates);
    summary.data.add({e.lambda, e.p_active, peak.mean, peak.std_error, attack.mean, attack.std_error, discrete_peak,
                      discrete_attack});
  }
  return {main, summary};
}

using ExperimentFn = std::vector<Output> (*)(Job&);

struct Entry {
  const char* id;
  const char* description;
  ExperimentFn fn;
};

const Entry kEntries[] = {
    {"ahmad-trace", "strength of single edges over time, additive tie-decay model", ahmad_trace},
    {"ahmad-moments", "ensemble mean strength at checkpoints against the closed forms", ahmad_moments},
    {"ahmad-gcc", "largest-component fraction against threshold g, additive model", ahmad_gcc},
    {"b2u-trace", "strength of single edges over time, back-to-unity model", b2u_trace},
    {"b2u-gcc-sweep", "largest-component fraction against interaction probability p, back-to-unity model",
     b2u_gcc_sweep},
    {"b2u-components", "node components and active edges of one back-to-unity network", b2u_components},
    {"walk-trace", "log-strength paths of single edges under the random-walk model", walk_trace_exp},
    {"walk-stationary", "histogram of walk endpoints over many networks", walk_stationary},
    {"fd-evolve", "finite-difference density evolved from a point mass", fd_evolve},
    {"fd-stationary", "stationary finite-difference density", fd_stationary},
    {"sir-compare", "stochastic SIR on a tie-decay contact network against the discrete recursion", sir_compare_exp},
};

const Entry& entry(const std::string& id) {
  for (const auto& e : kEntries) {
    if (id == e.id) return e;
  }
  throw ConfigError("experiment", fmt::format("unknown id '{}' (see list-experiments)", id));
}

std::vector<Output> dispatch(const ExperimentConfig& config, bool dry, std::vector<Violation>* violations) {
  Job job(config, dry);
  std::vector<Output> out;
  if (!known_experiment(config.experiment)) {
    job.checks.add("experiment", fmt::format("unknown id '{}' (see list-experiments)", config.experiment));
  } else if (config.realizations < 1) {
    job.checks.add("realizations", "must be at least 1");
  } else if (config.workers < 1) {
    job.checks.add("workers", "must be at least 1");
  } else {
    job.checks.guard("model", [&] { out = entry(config.experiment).fn(job); });
  }
  if (violations) *violations = job.checks.found();
  return out;
}

}  // namespace

std::vector<Violation> validate(const ExperimentConfig& config) {
  std::vector<Violation> found;
  dispatch(config, true, &found);
  return found;
}

std::vector<OutputFile> render(const ExperimentConfig& config) {
  std::vector<Violation> found;
  dispatch(config, true, &found);
  if (!found.empty()) {
    std::string message = found.front().message;
    for (std::size_t i = 1; i < found.size(); ++i) message += "; " + found[i].field + ": " + found[i].message;
    throw ConfigError(found.front().field, message);
  }
  const auto outputs = dispatch(config, false, nullptr);

  const OJson model = OJson::parse(config.model.dump());
  const OJson sweep = OJson::parse(config.sweep.dump());
  std::vector<OutputFile> files;
  for (const auto& o : outputs) {
    Manifest m;
    m.experiment = config.experiment;
    m.table = o.table;
    m.toolkit_version = toolkit_version();
    m.seed = config.seed;
    m.config_hash = hex64(config.hash());
    m.realizations = config.realizations;
    m.parameters = OJson{{"model", model}, {"sweep", sweep}, {"derived", o.derived}};
    m.columns = o.data.columns;
    const std::string name = o.table == "main" ? config.experiment + ".csv"
                                               : config.experiment + "-" + o.table + ".csv";
    files.push_back({name, render_csv(m, o.data)});
  }
  return files;
}

std::vector<std::filesystem::path> run(const ExperimentConfig& config) {
  const auto files = render(config);
  std::vector<std::filesystem::path> paths;
  for (const auto& f : files) {
    const auto path = std::filesystem::path(config.output) / f.name;
    write_atomic(path, f.content);
    paths.push_back(path);
  }
  return paths;
}

std::string describe(const std::string& experiment) { return entry(experiment).description; }

std::string toolkit_version() { return TIEDECAY_VERSION; }

}  // namespace tiedecay::experiments
