#include "tiedecay/epidemics.hpp"

#include <algorithm>
#include <cmath>

#include "tiedecay/errors.hpp"
#include "tiedecay/parallel.hpp"
#include "tiedecay/rng.hpp"
#include "tiedecay/stats.hpp"

namespace tiedecay {

void SirParams::validate() const {
  if (!(beta_bar >= 0.0 && beta_bar <= 1.0)) throw InputError("SIR: beta_bar must lie in [0, 1]");
  if (!(gamma_bar >= 0.0 && gamma_bar <= 1.0)) throw InputError("SIR: gamma_bar must lie in [0, 1]");
  if (population < 2) throw InputError("SIR: population must be at least 2");
  if (!(p_active >= 0.0 && p_active <= 1.0)) throw InputError("SIR: p_active must lie in [0, 1]");
}

SirState sir_discrete_step(const SirState& s, const SirParams& params) {
  const double infections = params.beta_bar * s.I * s.S / static_cast<double>(params.population);
  const double recoveries = params.gamma_bar * s.I;
  return {s.S - infections, s.I + infections - recoveries, s.R + recoveries};
}

std::vector<SirState> sir_discrete(const SirParams& params, const SirState& initial, std::size_t steps) {
  params.validate();
  std::vector<SirState> out;
  out.reserve(steps + 1);
  out.push_back(initial);
  for (std::size_t i = 0; i < steps; ++i) out.push_back(sir_discrete_step(out.back(), params));
  return out;
}

std::vector<SirState> sir_ode_reference(const SirParams& params, const SirState& initial, double t_end,
                                        double dt_fine) {
  params.validate();
  if (!(dt_fine > 0.0 && dt_fine <= 0.01)) throw InputError("sir_ode_reference: dt_fine must lie in (0, 0.01]");
  if (!(t_end >= 0.0)) throw InputError("sir_ode_reference: t_end must be non-negative");
  const double N = static_cast<double>(params.population);
  const double b = params.beta_bar, g = params.gamma_bar;
  auto rhs = [&](const SirState& s) {
    const double inf = b * s.I * s.S / N;
    const double rec = g * s.I;
    return SirState{-inf, inf - rec, rec};
  };
  auto axpy = [](const SirState& s, double h, const SirState& d) {
    return SirState{s.S + h * d.S, s.I + h * d.I, s.R + h * d.R};
  };
  const auto sub_steps = static_cast<std::size_t>(std::ceil(1.0 / dt_fine - 1e-9));
  const double h = 1.0 / static_cast<double>(sub_steps);
  const auto samples = static_cast<std::size_t>(std::floor(t_end + 1e-12));
  std::vector<SirState> out;
  out.reserve(samples + 1);
  SirState s = initial;
  out.push_back(s);
  for (std::size_t t = 0; t < samples; ++t) {
    for (std::size_t k = 0; k < sub_steps; ++k) {
      const SirState k1 = rhs(s);
      const SirState k2 = rhs(axpy(s, h / 2, k1));
      const SirState k3 = rhs(axpy(s, h / 2, k2));
      const SirState k4 = rhs(axpy(s, h, k3));
      s.S += h / 6 * (k1.S + 2 * k2.S + 2 * k3.S + k4.S);
      s.I += h / 6 * (k1.I + 2 * k2.I + 2 * k3.I + k4.I);
      s.R += h / 6 * (k1.R + 2 * k2.R + 2 * k3.R + k4.R);
    }
    out.push_back(s);
  }
  return out;
}

SirPopulation::SirPopulation(std::size_t population, std::int64_t infected, std::int64_t recovered)
    : labels_(population, Health::susceptible) {
  const auto n = static_cast<std::int64_t>(population);
  if (infected < 0 || recovered < 0 || infected + recovered > n) {
    throw InputError("SirPopulation: initial compartments do not fit the population");
  }
  for (std::int64_t i = 0; i < infected; ++i) labels_[static_cast<std::size_t>(i)] = Health::infected;
  for (std::int64_t i = infected; i < infected + recovered; ++i) {
    labels_[static_cast<std::size_t>(i)] = Health::recovered;
  }
  counts_ = {n - infected - recovered, infected, recovered};
}

double infection_probability(double p_active, double beta_bar, std::int64_t infected) {
  if (infected <= 0) return 0.0;
  const double per_contact = p_active * beta_bar;
  if (per_contact >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(infected) * std::log1p(-per_contact));
}

void SirPopulation::step(const SirParams& params, std::uint64_t seed, std::uint64_t realization, ContactMode mode) {
  const CounterRng rng(seed, realization, step_);
  const std::size_t n = labels_.size();
  const double pi = infection_probability(params.p_active, params.beta_bar, counts_.I);

  std::vector<std::size_t> infected;
  if (mode == ContactMode::explicit_contacts) {
    for (std::size_t j = 0; j < n; ++j) {
      if (labels_[j] == Health::infected) infected.push_back(j);
    }
  }

  std::vector<Health> next = labels_;
  SirCounts c = counts_;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i] == Health::susceptible) {
      bool caught = false;
      if (mode == ContactMode::annealed) {
        caught = counts_.I > 0 && rng.uniform_at(i) < pi;
      } else {
        // two draws per (susceptible, infected) pair after the n per-individual draws
        for (std::size_t j : infected) {
          const std::uint64_t slot = n + 2 * (static_cast<std::uint64_t>(i) * n + j);
          if (rng.uniform_at(slot) < params.p_active && rng.uniform_at(slot + 1) < params.beta_bar) {
            caught = true;
            break;
          }
        }
      }
      if (caught) {
        next[i] = Health::infected;
        --c.S;
        ++c.I;
      }
    } else if (labels_[i] == Health::infected) {
      if (rng.uniform_at(i) < params.gamma_bar) {
        next[i] = Health::recovered;
        --c.I;
        ++c.R;
      }
    }
  }
  labels_.swap(next);
  counts_ = c;
  ++step_;
}

SirCounts sir_tiedecay_step(SirPopulation& population, const SirParams& params, std::uint64_t seed,
                            std::uint64_t realization, ContactMode mode) {
  population.step(params, seed, realization, mode);
  return population.counts();
}

std::vector<SirCounts> sir_tiedecay_run(const SirParams& params, const SirCounts& initial, std::size_t steps,
                                        std::uint64_t seed, std::uint64_t realization, ContactMode mode) {
  params.validate();
  if (initial.S + initial.I + initial.R != static_cast<std::int64_t>(params.population)) {
    throw InputError("sir_tiedecay_run: initial compartments must sum to the population");
  }
  SirPopulation pop(params.population, initial.I, initial.R);
  std::vector<SirCounts> out;
  out.reserve(steps + 1);
  out.push_back(pop.counts());
  for (std::size_t t = 0; t < steps; ++t) out.push_back(sir_tiedecay_step(pop, params, seed, realization, mode));
  return out;
}

std::size_t peak_time(std::span<const SirState> trajectory) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < trajectory.size(); ++t) {
    if (trajectory[t].I > trajectory[best].I) best = t;
  }
  return best;
}

SirComparison sir_compare(std::span<const double> lambda_values, const SirParams& params, const SirCounts& initial,
                          std::size_t steps, std::size_t realizations, std::uint64_t seed, unsigned workers) {
  params.validate();
  if (realizations < 1) throw InputError("sir_compare: need at least one realization");
  const double N = static_cast<double>(params.population);
  SirComparison out;
  out.discrete = sir_discrete(params, {static_cast<double>(initial.S), static_cast<double>(initial.I),
                                       static_cast<double>(initial.R)},
                              steps);

  for (std::size_t k = 0; k < lambda_values.size(); ++k) {
    SirParams point = params;
    point.p_active = lambda_values[k] / N;
    point.validate();
    const std::uint64_t lambda_seed = CounterRng::derive_key(seed, k, 0x534952ULL);

    std::vector<std::vector<SirCounts>> runs(realizations);
    parallel_for(realizations, workers,
                 [&](std::size_t r) { runs[r] = sir_tiedecay_run(point, initial, steps, lambda_seed, r); });

    SirEnsemble e;
    e.lambda = lambda_values[k];
    e.p_active = point.p_active;
    e.mean.resize(steps + 1);
    e.std_error.resize(steps + 1);
    for (std::size_t t = 0; t <= steps; ++t) {
      RunningStats s, i, rr;
      for (const auto& run : runs) {
        s.add(static_cast<double>(run[t].S));
        i.add(static_cast<double>(run[t].I));
        rr.add(static_cast<double>(run[t].R));
      }
      e.mean[t] = {s.mean(), i.mean(), rr.mean()};
      e.std_error[t] = {s.std_error(), i.std_error(), rr.std_error()};
    }
    for (const auto& run : runs) {
      std::size_t best = 0;
      for (std::size_t t = 1; t < run.size(); ++t) {
        if (run[t].I > run[best].I) best = t;
      }
      e.peak_times.push_back(static_cast<double>(best));
      e.attack_rates.push_back(1.0 - static_cast<double>(run.back().S) / N);
    }
    out.ensembles.push_back(std::move(e));
  }
  return out;
}

}  // namespace tiedecay
