#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tiedecay {

struct SirParams {
  double beta_bar = 0.0;   // infection probability per active contact per step
  double gamma_bar = 0.0;  // recovery probability per step
  std::size_t population = 2;
  double p_active = 0.0;  // per-pair probability that a contact is active

  double lambda() const { return static_cast<double>(population) * p_active; }
  void validate() const;  // throws InputError
};

struct SirState {
  double S = 0.0;
  double I = 0.0;
  double R = 0.0;
};

struct SirCounts {
  std::int64_t S = 0;
  std::int64_t I = 0;
  std::int64_t R = 0;
};

// Well-mixed discrete recursion:
// S' = S - b I S / N, I' = I + b I S / N - g I, R' = R + g I.
SirState sir_discrete_step(const SirState& state, const SirParams& params);
std::vector<SirState> sir_discrete(const SirParams& params, const SirState& initial, std::size_t steps);

// Continuous-time SIR integrated with classical RK4 at step dt_fine (<= 0.01),
// sampled at t = 0, 1, ..., floor(t_end).
std::vector<SirState> sir_ode_reference(const SirParams& params, const SirState& initial, double t_end,
                                        double dt_fine = 1e-3);

enum class ContactMode {
  annealed,           // aggregate infection probability 1 - (1 - P b)^I
  explicit_contacts,  // one Bernoulli(P) contact and Bernoulli(b) transmission per (S, I) pair
};

enum class Health : std::uint8_t { susceptible, infected, recovered };

// Population with per-individual labels, advanced synchronously.
class SirPopulation {
 public:
  SirPopulation(std::size_t population, std::int64_t infected, std::int64_t recovered = 0);

  SirCounts counts() const { return counts_; }
  std::span<const Health> labels() const { return labels_; }

  // One step from the frozen start-of-step state. Draws come from the stream
  // keyed by (seed, realization, step index).
  void step(const SirParams& params, std::uint64_t seed, std::uint64_t realization,
            ContactMode mode = ContactMode::annealed);
  std::uint64_t steps_taken() const { return step_; }

 private:
  std::vector<Health> labels_;
  SirCounts counts_;
  std::uint64_t step_ = 0;
};

// Per-susceptible infection probability under the annealed contact model.
double infection_probability(double p_active, double beta_bar, std::int64_t infected);

SirCounts sir_tiedecay_step(SirPopulation& population, const SirParams& params, std::uint64_t seed,
                            std::uint64_t realization, ContactMode mode = ContactMode::annealed);

std::vector<SirCounts> sir_tiedecay_run(const SirParams& params, const SirCounts& initial, std::size_t steps,
                                        std::uint64_t seed, std::uint64_t realization,
                                        ContactMode mode = ContactMode::annealed);

struct SirEnsemble {
  double lambda = 0.0;
  double p_active = 0.0;
  std::vector<SirState> mean;       // per step
  std::vector<SirState> std_error;  // per step
  std::vector<double> peak_times;   // per realization: first step of maximal I
  std::vector<double> attack_rates;  // per realization: 1 - S_final / N
};

struct SirComparison {
  std::vector<SirState> discrete;
  std::vector<SirEnsemble> ensembles;  // one per lambda, in input order
};

// First step at which I is maximal.
std::size_t peak_time(std::span<const SirState> trajectory);

SirComparison sir_compare(std::span<const double> lambda_values, const SirParams& params, const SirCounts& initial,
                          std::size_t steps, std::size_t realizations, std::uint64_t seed, unsigned workers = 1);

}  // namespace tiedecay
