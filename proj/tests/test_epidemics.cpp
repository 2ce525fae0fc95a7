#include <cmath>

#include "doctest.h"
#include "tiedecay/epidemics.hpp"
#include "tiedecay/errors.hpp"
#include "tiedecay/graph.hpp"
#include "tiedecay/stats.hpp"

using namespace tiedecay;

namespace {

SirParams fig7(double p_active = 0.0) {
  SirParams s;
  s.beta_bar = 0.6;
  s.gamma_bar = 0.1;
  s.population = 5000;
  s.p_active = p_active;
  return s;
}

double binom_pmf(int n, int k, double p) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
}

}  // namespace

TEST_CASE("discrete recursion basics") {
  const auto p = fig7();
  const SirState none{4000, 0, 1000};
  const auto same = sir_discrete_step(none, p);
  CHECK(same.S == none.S);
  CHECK(same.I == none.I);
  CHECK(same.R == none.R);

  auto no_spread = p;
  no_spread.beta_bar = 0.0;
  const auto traj = sir_discrete(no_spread, {4990, 10, 0}, 20);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    CHECK(traj[t].S == 4990);
    CHECK(traj[t].I == doctest::Approx(10 * std::pow(0.9, static_cast<double>(t))));
  }
}

TEST_CASE("discrete recursion at the Fig. 7 parameters") {
  const auto traj = sir_discrete(fig7(), {4990, 10, 0}, 300);
  const std::size_t peak = peak_time(traj);
  CHECK(peak > 0);
  CHECK(peak < 300);
  CHECK(traj.back().I < 1e-3 * traj[peak].I);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    CHECK(traj[t].S + traj[t].I + traj[t].R == doctest::Approx(5000.0).epsilon(1e-13));
    if (t > 0) {
      CHECK(traj[t].S <= traj[t - 1].S);
      CHECK(traj[t].R >= traj[t - 1].R);
    }
  }
}

TEST_CASE("ODE reference") {
  auto p = fig7();
  p.beta_bar = 0.0;
  const auto decay = sir_ode_reference(p, {4990, 10, 0}, 30, 0.01);
  for (std::size_t t = 0; t < decay.size(); ++t) {
    CHECK(decay[t].I == doctest::Approx(10 * std::exp(-0.1 * static_cast<double>(t))).epsilon(1e-10));
    CHECK(decay[t].S == 4990);
  }
  p = fig7();
  p.gamma_bar = 0.0;
  for (const auto& s : sir_ode_reference(p, {4990, 10, 0}, 30, 0.01)) CHECK(s.R == 0.0);

  const auto ode = sir_ode_reference(fig7(), {4990, 10, 0}, 300, 0.005);
  const auto disc = sir_discrete(fig7(), {4990, 10, 0}, 300);
  for (const auto& s : ode) CHECK(s.S + s.I + s.R == doctest::Approx(5000.0).epsilon(1e-12));
  CHECK(std::abs(ode.back().R - disc.back().R) < 0.02 * 5000);
  CHECK_THROWS_AS(sir_ode_reference(fig7(), {4990, 10, 0}, 10, 0.1), InputError);
}

TEST_CASE("tie-decay SIR bookkeeping") {
  const auto p = fig7(1.0 / 5000);
  const auto run = sir_tiedecay_run(p, {4990, 10, 0}, 200, 5, 0);
  for (std::size_t t = 0; t < run.size(); ++t) {
    CHECK(run[t].S + run[t].I + run[t].R == 5000);
    if (t > 0) {
      CHECK(run[t].S <= run[t - 1].S);
      CHECK(run[t].R >= run[t - 1].R);
    }
  }
  const auto again = sir_tiedecay_run(p, {4990, 10, 0}, 200, 5, 0);
  for (std::size_t t = 0; t < run.size(); ++t) CHECK(run[t].I == again[t].I);
}

TEST_CASE("no infecteds is absorbing; certain transmission infects everyone") {
  const auto none = sir_tiedecay_run(fig7(0.5), {4000, 0, 1000}, 10, 1, 0);
  for (const auto& c : none) CHECK(c.S == 4000);

  SirParams certain = fig7(1.0);
  certain.beta_bar = 1.0;
  certain.gamma_bar = 0.0;
  for (auto mode : {ContactMode::annealed, ContactMode::explicit_contacts}) {
    SirPopulation pop(50, 1);
    sir_tiedecay_step(pop, {1.0, 0.0, 50, 1.0}, 3, 0, mode);
    CHECK(pop.counts().S == 0);
    CHECK(pop.counts().I == 50);
  }
}

TEST_CASE("newly infected individuals do not recover in the same step") {
  SirParams p{1.0, 1.0, 10, 1.0};
  SirPopulation pop(10, 1);
  sir_tiedecay_step(pop, p, 1, 0);
  CHECK(pop.counts().I == 9);
  CHECK(pop.counts().R == 1);
}

TEST_CASE("aggregated infection probability matches brute-force contacts") {
  const SirParams p{0.6, 0.0, 20, 0.3};
  const int S = 15, I = 5;
  const double pi = infection_probability(p.p_active, p.beta_bar, I);
  CHECK(pi == doctest::Approx(1.0 - std::pow(1.0 - 0.18, 5)).epsilon(1e-14));
  std::vector<double> expected(S + 1);
  for (int k = 0; k <= S; ++k) expected[k] = 1e5 * binom_pmf(S, k, pi);
  for (auto mode : {ContactMode::explicit_contacts, ContactMode::annealed}) {
    std::vector<double> observed(S + 1, 0.0);
    for (std::uint64_t trial = 0; trial < 100000; ++trial) {
      SirPopulation pop(20, I);
      sir_tiedecay_step(pop, p, 91, trial, mode);
      observed[static_cast<std::size_t>(pop.counts().I - I)] += 1.0;
    }
    CHECK(chi_square_pooled(observed, expected).p_value > 0.01);
  }
}

TEST_CASE("lambda > 1 is the GCC criterion on the same parameters") {
  for (std::size_t n : {100u, 5000u, 1000000u}) {
    for (double lambda : {0.3, 0.999, 1.001, 3.0}) {
      SirParams p = fig7(lambda / static_cast<double>(n));
      p.population = n;
      CHECK((er_gcc_criterion(n, p.p_active) == GccRegime::supercritical) == (p.lambda() > 1.0));
    }
  }
}

TEST_CASE("sir_compare is reproducible across worker counts") {
  const std::vector<double> lambdas{0.5, 2.0};
  SirParams p = fig7();
  p.population = 500;
  const auto a = sir_compare(lambdas, p, {499, 1, 0}, 60, 8, 3, 1);
  const auto b = sir_compare(lambdas, p, {499, 1, 0}, 60, 8, 3, 3);
  REQUIRE(a.ensembles.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(a.ensembles[k].p_active == doctest::Approx(lambdas[k] / 500));
    for (std::size_t t = 0; t <= 60; ++t) CHECK(a.ensembles[k].mean[t].I == b.ensembles[k].mean[t].I);
    CHECK(a.ensembles[k].peak_times == b.ensembles[k].peak_times);
  }
}
