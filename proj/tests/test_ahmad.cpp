#include <cmath>
#include <string>

#include "doctest.h"
#include "tiedecay/ahmad.hpp"
#include "tiedecay/errors.hpp"
#include "tiedecay/stats.hpp"

using namespace tiedecay;

namespace {

// Exact E[s_t] and E[s_t^2] by conditioning on the last step.
std::pair<double, double> exact_moments(double p, double alpha, double s0, int t) {
  const double sigma = std::exp(-alpha);
  double m1 = s0, m2 = s0 * s0;
  for (int i = 0; i < t; ++i) {
    const double n1 = p * (m1 + 1.0) + (1.0 - p) * sigma * m1;
    const double n2 = p * (m2 + 2.0 * m1 + 1.0) + (1.0 - p) * sigma * sigma * m2;
    m1 = n1;
    m2 = n2;
  }
  return {m1, m2};
}

double brute_double_sum(double p, double alpha, int t) {
  double total = 0.0;
  for (int i = 1; i <= t; ++i)
    for (int j = 0; j <= t - i; ++j) total += std::pow(p, i) * std::exp(-j * alpha);
  return total;
}

AhmadParams params(std::size_t n, double p, double alpha, std::uint64_t T, double s0 = 0.0) {
  AhmadParams a;
  a.n = n;
  a.p = p;
  a.alpha = alpha;
  a.T = T;
  a.s0 = s0;
  return a;
}

}  // namespace

TEST_CASE("step_edge") {
  CHECK(step_edge(0.0, true, 0.01) == 1.0);
  CHECK(step_edge(1.0, false, 0.01) == doctest::Approx(0.990050).epsilon(1e-6));
  CHECK(step_edge(2.5, true, 0.3) == 3.5);
  CHECK_THROWS_AS(step_edge(-1.0, false, 0.1), InputError);
}

TEST_CASE("simulate with p = 0 is pure decay") {
  const auto m = simulate(params(20, 0.0, 0.05, 40, 3.0), 1);
  for (double s : m.strengths()) CHECK(s == doctest::Approx(3.0 * std::exp(-0.05 * 40)).epsilon(1e-14));
}

TEST_CASE("simulated strengths stay within [0, T]") {
  const auto m = simulate(params(120, 0.3, 0.02, 25), 3);
  for (double s : m.strengths()) {
    CHECK(s >= 0.0);
    CHECK(s <= 25.0);
  }
}

TEST_CASE("simulate is deterministic and independent of worker count") {
  const auto p = params(300, 0.01, 0.05, 200);
  const auto a = simulate(p, 42, 0, 1);
  const auto b = simulate(p, 42, 0, 3);
  CHECK(std::equal(a.strengths().begin(), a.strengths().end(), b.strengths().begin()));
  const auto c = simulate(p, 43, 0, 1);
  CHECK(!std::equal(a.strengths().begin(), a.strengths().end(), c.strengths().begin()));
}

TEST_CASE("event-driven and stepwise kernels agree with the exact moments") {
  const double p = 0.1, alpha = 0.05;
  const int t = 50;
  const auto [m1, m2] = exact_moments(p, alpha, 0.0, t);
  CHECK(m1 == doctest::Approx(2.036743).epsilon(1e-6));

  const auto fast = sample_edges(params(2, p, alpha, t), 400000, 8);
  RunningStats f;
  for (double s : fast) f.add(s);
  RunningStats slow;
  for (std::uint64_t e = 0; e < 100000; ++e) slow.add(edge_trace(params(2, p, alpha, t), 9, e).back());

  const double var = m2 - m1 * m1;
  CHECK(std::abs(f.mean() - m1) < 4.0 * std::sqrt(var / 400000.0));
  CHECK(std::abs(slow.mean() - m1) < 4.0 * std::sqrt(var / 100000.0));
  CHECK(f.variance() == doctest::Approx(var).epsilon(0.02));
  CHECK(slow.variance() == doctest::Approx(var).epsilon(0.03));
}

TEST_CASE("edge_trace follows the update rule") {
  const auto p = params(2, 0.003, 0.01, 1000);
  const auto trace = edge_trace(p, 17);
  REQUIRE(trace.size() == 1001);
  CHECK(trace[0] == 0.0);
  for (std::size_t t = 1; t < trace.size(); ++t) {
    const bool jumped = trace[t] == trace[t - 1] + 1.0;
    const bool decayed = trace[t] == doctest::Approx(trace[t - 1] * std::exp(-0.01)).epsilon(1e-14);
    CHECK((jumped || decayed));
  }
}

TEST_CASE("checkpoints are prefixes of longer runs") {
  const auto shorter = params(60, 0.05, 0.1, 10);
  const auto longer = params(60, 0.05, 0.1, 20);
  const std::vector<std::uint64_t> checkpoints{10, 20};
  const auto stats = ensemble_stats(longer, checkpoints, 1, 5);
  const auto direct = simulate(shorter, 5);
  RunningStats d;
  for (double s : direct.strengths()) d.add(s);
  CHECK(stats[0].mean() == doctest::Approx(d.mean()).epsilon(1e-13));
  const auto full = simulate(longer, 5);
  RunningStats f;
  for (double s : full.strengths()) f.add(s);
  CHECK(stats[1].mean() == doctest::Approx(f.mean()).epsilon(1e-13));
}

TEST_CASE("mean_finite_time") {
  auto a = params(2, 0.1, 0.05, 0);
  CHECK(mean_finite_time(a, 0) == 0.0);
  CHECK(mean_finite_time(a, 50) == doctest::Approx(2.0902).epsilon(0.00005 / 2.0902));
  CHECK(mean_finite_time(a, 100) == doctest::Approx(2.2628).epsilon(0.00005 / 2.2628));
  CHECK(mean_finite_time(a, 150) == doctest::Approx(2.2770).epsilon(0.00005 / 2.2770));
  CHECK(mean_finite_time(a, 500) == doctest::Approx(2.2782).epsilon(0.00005 / 2.2782));
  for (int t : {1, 7, 50, 333}) CHECK(mean_finite_time(a, t) == doctest::Approx(brute_double_sum(0.1, 0.05, t)).epsilon(1e-12));
}

TEST_CASE("mean_finite_time is nondecreasing and bounded by the limit") {
  for (double p : {0.001, 0.05, 0.3, 0.8}) {
    for (double alpha : {0.01, 0.1, 1.0}) {
      const auto a = params(2, p, alpha, 0);
      const double limit = mean_stationary(p, alpha);
      double prev = 0.0;
      for (std::uint64_t t = 0; t <= 2000; t += 25) {
        const double m = mean_finite_time(a, t);
        CHECK(m >= prev);
        CHECK(m <= limit * (1.0 + 1e-12));
        prev = m;
      }
      CHECK(mean_finite_time(a, 20000) == doctest::Approx(limit).epsilon(1e-9));
    }
  }
}

TEST_CASE("mean_stationary") {
  CHECK(mean_stationary(0.1, 0.05) == doctest::Approx(2.2782).epsilon(0.00005 / 2.2782));
  CHECK(mean_stationary(0.0, 0.3) == 0.0);
  const double direct = 0.003 / ((1.0 - std::exp(-0.01)) * (1.0 - 0.003));
  CHECK(mean_stationary(0.003, 0.01) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(mean_stationary(0.003, 0.01) == doctest::Approx(0.302406).epsilon(1e-5 / 0.3));
  CHECK_THROWS_AS(mean_stationary(1.0, 0.1), DomainError);
  CHECK_THROWS_AS(mean_stationary(0.1, 0.0), DomainError);
}

TEST_CASE("long-run Monte Carlo mean matches the limit at the Fig. 1 rates") {
  const auto a = params(2, 0.003, 0.01, stationary_burn_in(0.01));
  const auto samples = sample_edges(a, 300000, 21);
  const auto ms = mean_stderr(samples);
  CHECK(std::abs(ms.mean - mean_stationary(0.003, 0.01)) < 4.0 * ms.std_error);
}

TEST_CASE("raw moment recursion reproduces mean and variance") {
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      const double p = 0.09 * i;
      const double alpha = 0.02 * j * j;
      const auto m = raw_moments_stationary(p, alpha, 2);
      CHECK(m[0] == doctest::Approx(mean_stationary(p, alpha)).epsilon(1e-12));
      const double var = p / ((1.0 - std::exp(-2 * alpha)) * (1.0 - p) * (1.0 - p));
      CHECK(m[1] - m[0] * m[0] == doctest::Approx(var).epsilon(1e-12));
    }
  }
  const auto m = raw_moments_stationary(0.1, 0.05, 3);
  CHECK(m[0] == doctest::Approx(2.2782).epsilon(0.00005 / 2.2782));
  CHECK(m[1] - m[0] * m[0] == doctest::Approx(1.29733).epsilon(1e-5));
  CHECK(m[1] == doctest::Approx(6.4877).epsilon(1e-4));
  for (double x : raw_moments_stationary(1e-12, 0.5, 5)) CHECK(x < 1e-10);
  CHECK_THROWS_AS(raw_moments_stationary(1.0, 0.05, 2), DomainError);
}

TEST_CASE("Monte Carlo raw moments at stationarity") {
  const double p = 0.1, alpha = 0.05;
  const auto a = params(2, p, alpha, stationary_burn_in(alpha));
  const auto samples = sample_edges(a, 1000000, 33);
  const auto m = raw_moments_stationary(p, alpha, 6);
  for (int k = 1; k <= 3; ++k) {
    RunningStats s;
    for (double x : samples) s.add(std::pow(x, k));
    // var(s^k) = m_{2k} - m_k^2
    const double sd = std::sqrt((m[2 * k - 1] - m[k - 1] * m[k - 1]) / static_cast<double>(samples.size()));
    CHECK(std::abs(s.mean() - m[k - 1]) < 4.0 * sd);
  }
}

TEST_CASE("memory of the initial strength is lost by T = 500") {
  const double limit = mean_stationary(0.1, 0.05);
  for (double s0 : {0.0, 10.0, 100.0}) {
    const std::vector<std::uint64_t> at{500};
    const auto stats = ensemble_stats(params(1000, 0.1, 0.05, 500, s0), at, 1, 77);
    CHECK(std::abs(stats[0].mean() - limit) < 3.0 * stats[0].std_error());
  }
}

TEST_CASE("poisson_cdf_approx") {
  auto a = params(2000, 1e-5, 0.01, 1000);
  const double lower = std::exp(-1000 * 0.01);
  CHECK(poisson_cdf_approx(a, lower) == doctest::Approx(std::exp(-0.01)).epsilon(1e-13));
  CHECK(poisson_cdf_approx(a, 0.6345) == doctest::Approx(1.0 - 1.0 / 2000).epsilon(2e-6));
  a.alpha = 0.1;
  CHECK(poisson_cdf_approx(a, 0.0106) == doctest::Approx(1.0 - 1.0 / 2000).epsilon(2e-6));
  a.s0 = 1.0;
  CHECK_THROWS_AS(poisson_cdf_approx(a, 1e-50), DomainError);
}

TEST_CASE("poisson_cdf_approx inverts critical_threshold") {
  for (double alpha : {0.001, 0.01, 0.1}) {
    for (double s0 : {0.0, 0.5}) {
      auto a = params(2000, 1e-5, alpha, 1000, s0);
      const double g = critical_threshold(a);
      CHECK(poisson_cdf_approx(a, g) == doctest::Approx(1.0 - 1.0 / 2000).epsilon(1e-14));
    }
  }
}

TEST_CASE("critical_threshold") {
  auto a = params(2000, 1e-5, 0.01, 1000);
  CHECK(critical_threshold(a) == doctest::Approx(0.6345).epsilon(0.00005 / 0.6345));
  a.alpha = 0.1;
  CHECK(critical_threshold(a) == doctest::Approx(0.0106).epsilon(0.00005 / 0.0106));
  a.alpha = 0.001;
  CHECK(critical_threshold(a) == doctest::Approx(0.9555).epsilon(0.00005 / 0.9555));
  a.p = 0.0;
  CHECK_THROWS_AS(critical_threshold(a), DomainError);
}

TEST_CASE("single-arrival formulas warn outside their regime") {
  std::string seen;
  set_warning_handler([&](std::string_view m) { seen = m; });
  auto a = params(2000, 1e-3, 0.01, 1000);
  critical_threshold(a);
  CHECK(seen.find("lambda") != std::string::npos);
  seen.clear();
  a.p = 1e-5;
  critical_threshold(a);
  CHECK(seen.empty());
  set_warning_handler(nullptr);
}

TEST_CASE("gcc_sweep matches threshold_edges + components") {
  const auto a = params(60, 0.02, 0.05, 100);
  const std::vector<double> thresholds{0.9, 0.1, 0.5, 0.0, 1.5};
  const auto fractions = gcc_sweep_fractions(a, thresholds, 4, 9);
  for (std::uint64_t r = 0; r < 4; ++r) {
    const auto m = simulate(a, 9, r);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      auto edges = threshold_edges(m, {thresholds[k]}, ThresholdMode::at_least);
      if (thresholds[k] == 0.0) edges = threshold_edges(m, {0.0}, ThresholdMode::strictly_above);
      CHECK(fractions[r][k] == components(60, edges).largest_fraction);
    }
  }
  CHECK(gcc_sweep(a, {}, 3, 1).empty());
  const auto w1 = gcc_sweep(a, thresholds, 5, 2, 1);
  const auto w3 = gcc_sweep(a, thresholds, 5, 2, 3);
  for (std::size_t k = 0; k < thresholds.size(); ++k) CHECK(w1[k].mean_fraction == w3[k].mean_fraction);
}

TEST_CASE("thresholds far above g_crit leave only small components") {
  const auto a = params(2000, 1e-5, 0.1, 1000);
  const std::vector<double> thresholds{0.9};
  const auto rows = gcc_sweep(a, thresholds, 3, 4);
  CHECK(rows[0].mean_fraction < 5.0 / 2000);
}

TEST_CASE("g = 0 recovers an ER graph at density 1 - (1 - p)^T") {
  const auto a = params(300, 1e-3, 0.2, 5);
  const double q = 1.0 - std::pow(1.0 - a.p, 5);
  const std::vector<double> zero{0.0};
  const auto fractions = gcc_sweep_fractions(a, zero, 200, 3);
  RunningStats tie, er;
  for (const auto& row : fractions) tie.add(row[0]);
  for (std::uint64_t r = 0; r < 200; ++r) er.add(components(300, sample_er_edges(300, q, 4, r)).largest_fraction);
  CHECK(std::abs(tie.mean() - er.mean()) < 4.0 * std::hypot(tie.std_error(), er.std_error()));
}
