#pragma once

// Per-edge interaction/decay process shared by the Ahmad and back-to-unity
// models. Each step the edge interacts with probability p (strength -> f(s))
// or decays (s -> s * sigma).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tiedecay/rng.hpp"

namespace tiedecay::detail {

class EdgeProcess {
 public:
  EdgeProcess(double p, double alpha, std::uint64_t steps)
      : p_(p), alpha_(alpha), steps_(steps), log_q_(std::log1p(-p)), decay_(steps + 1) {
    for (std::uint64_t k = 0; k <= steps; ++k) decay_[k] = std::exp(-alpha * static_cast<double>(k));
    // probability of no interaction in the whole run; compared against the
    // first uniform so quiet edges never pay for a logarithm
    quiet_ = p_ == 0.0 ? 1.0 : std::exp(static_cast<double>(steps) * log_q_);
  }

  std::uint64_t steps() const noexcept { return steps_; }
  double p() const noexcept { return p_; }
  double decay(std::uint64_t k) const noexcept { return decay_[k]; }

  // Event-driven run: jumps between interactions with geometric gaps.
  // If `checkpoints` (sorted, each <= steps) is non-empty, out[i] receives the
  // strength after step checkpoints[i].
  template <class Interact>
  double run(CounterRng& rng, double s0, Interact interact, std::span<const std::uint64_t> checkpoints = {},
             double* out = nullptr) const {
    std::uint64_t t = 0;
    double s = s0;
    std::size_t c = 0;
    bool first = true;
    for (;;) {
      std::uint64_t gap;
      if (p_ == 0.0) {
        gap = kNeverSucceeds;
      } else if (p_ == 1.0) {
        gap = 0;
      } else {
        const double u = 1.0 - rng.uniform();
        if (first && u <= quiet_) {
          gap = kNeverSucceeds;
        } else {
          const double k = std::floor(std::log(u) / log_q_);
          gap = k >= static_cast<double>(steps_) ? kNeverSucceeds : static_cast<std::uint64_t>(k);
        }
      }
      first = false;
      const std::uint64_t remaining = steps_ - t;
      if (gap >= remaining) {
        for (; c < checkpoints.size(); ++c) out[c] = s * decay_[checkpoints[c] - t];
        return s * decay_[remaining];
      }
      const std::uint64_t event = t + gap + 1;
      for (; c < checkpoints.size() && checkpoints[c] < event; ++c) out[c] = s * decay_[checkpoints[c] - t];
      s = interact(s * decay_[gap]);
      t = event;
      for (; c < checkpoints.size() && checkpoints[c] == event; ++c) out[c] = s;
    }
  }

  // Step-by-step reference run: one Bernoulli draw per step.
  template <class Step>
  double run_stepwise(CounterRng& rng, double s0, Step step, std::vector<double>* trace = nullptr) const {
    double s = s0;
    if (trace) {
      trace->clear();
      trace->reserve(steps_ + 1);
      trace->push_back(s);
    }
    for (std::uint64_t t = 0; t < steps_; ++t) {
      s = step(s, rng.uniform() < p_);
      if (trace) trace->push_back(s);
    }
    return s;
  }

 private:
  double p_;
  double alpha_;
  std::uint64_t steps_;
  double log_q_;
  std::vector<double> decay_;
  double quiet_;
};

}  // namespace tiedecay::detail
