#include <cmath>

#include "doctest.h"
#include "tiedecay/back_to_unity.hpp"
#include "tiedecay/errors.hpp"
#include "tiedecay/stats.hpp"

using namespace tiedecay;

namespace {

BackToUnityParams params(std::size_t n, double p, double alpha, std::uint64_t T, double g) {
  BackToUnityParams b;
  b.n = n;
  b.p = p;
  b.alpha = alpha;
  b.T = T;
  b.g = g;
  return b;
}

}  // namespace

TEST_CASE("step_edge_b2u") {
  CHECK(step_edge_b2u(0.3, true, 0.01) == 1.0);
  CHECK(step_edge_b2u(1.0, false, 0.01) == doctest::Approx(0.990050).epsilon(1e-6));
  CHECK(step_edge_b2u(0.0, false, 0.01) == 0.0);
  CHECK_THROWS_AS(step_edge_b2u(1.5, false, 0.01), InputError);
}

TEST_CASE("moment_stationary_b2u") {
  for (int n = 1; n <= 5; ++n) CHECK(moment_stationary_b2u(1.0, 0.3, n) == 1.0);
  const double p = 1.0 / 1100;
  CHECK(moment_stationary_b2u(p, 0.01, 1) == doctest::Approx(p / (1.0 - std::exp(-0.01) * (1.0 - p))).epsilon(1e-14));
  CHECK(moment_stationary_b2u(p, 0.01, 1) == doctest::Approx(0.08378).epsilon(0.000005 / 0.08378));
  CHECK(moment_stationary_b2u(0.2, 800.0, 3) == doctest::Approx(0.2).epsilon(1e-12));
  double prev = 1.0;
  for (int n = 1; n <= 8; ++n) {
    const double m = moment_stationary_b2u(0.01, 0.05, n);
    CHECK(m > 0.0);
    CHECK(m <= prev);
    prev = m;
  }
  CHECK_THROWS_AS(moment_stationary_b2u(0.0, 0.0, 1), DomainError);
}

TEST_CASE("long-run Monte Carlo mean matches the first moment") {
  const double p = 1.0 / 1100;
  const auto samples = sample_edges_b2u(params(2, p, 0.01, 3000, 0.5), 400000, 12);
  const auto ms = mean_stderr(samples);
  CHECK(std::abs(ms.mean - moment_stationary_b2u(p, 0.01, 1)) < 4.0 * ms.std_error);
  for (double s : samples) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("prob_active at the Fig. 4 parameters") {
  const double p = 1.0 / 1100;
  CHECK(std::abs(prob_active(p, 0.01, 0.95) - 0.0054) < 0.00005);
  CHECK(std::abs(prob_active(p, 0.01, 0.995) - 9.09e-4) < 0.005e-4);
  CHECK(prob_active(0.3, 0.01, 1.0) == 0.0);
  CHECK(gcc_predicted(1000, p, 0.01, 0.95));
  CHECK_FALSE(gcc_predicted(1000, p, 0.01, 0.995));
  CHECK_FALSE(gcc_predicted(1000, 0.9, 0.01, 1.0));
}

TEST_CASE("prob_active is monotone") {
  for (double alpha : {0.01, 0.1, 1.0}) {
    double prev = -1.0;
    for (double p = 0.0; p <= 1.0; p += 0.01) {
      const double v = prob_active(p, alpha, 0.7);
      CHECK(v >= prev);
      prev = v;
    }
    prev = 2.0;
    for (double g = 0.01; g <= 1.0; g += 0.01) {
      const double v = prob_active(0.05, alpha, g);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("prob_active is constant between ceiling breakpoints and jumps across them") {
  const double alpha = 0.1, p = 0.02;
  for (int k = 1; k <= 5; ++k) {
    const double lo = std::exp(-(k + 1) * alpha);
    const double hi = std::exp(-k * alpha);
    // inside (e^{-(k+1) alpha}, e^{-k alpha}) the step count is k + 1
    const double inner1 = lo + 0.2 * (hi - lo);
    const double inner2 = lo + 0.8 * (hi - lo);
    CHECK(prob_active(p, alpha, inner1) == prob_active(p, alpha, inner2));
    CHECK(steps_above(alpha, inner1) == static_cast<std::uint64_t>(k + 1));
    const double above = hi + 0.1 * (std::exp(-(k - 1) * alpha) - hi);
    CHECK(prob_active(p, alpha, above) < prob_active(p, alpha, inner2));
  }
}

TEST_CASE("critical_p") {
  CHECK(critical_p(1000, 0.01, 0.9) == doctest::Approx(9.09504e-5).epsilon(1e-5));
  CHECK(std::abs(critical_p(1000, 0.01, 0.9) - 9e-5) < 0.5e-5);
  CHECK(std::abs(critical_p(1000, 0.1, 0.9) - 0.5e-3) < 0.05e-3);
  CHECK(std::abs(critical_p(1000, 1.0, 0.9) - 1e-3) < 0.05e-3);
  CHECK(critical_p_approx(1000, 0.1, 0.9) == doctest::Approx(0.5e-3));
  CHECK_THROWS_AS(critical_p(1000, 0.1, 1.0), DomainError);
  for (std::size_t n : {2u, 10u, 1000u, 123456u}) {
    for (double alpha : {0.001, 0.01, 0.1, 1.0, 3.0}) {
      for (double g : {0.05, 0.5, 0.9, 0.999}) {
        const double pc = critical_p(n, alpha, g);
        CHECK(prob_active(pc, alpha, g) == doctest::Approx(1.0 / static_cast<double>(n)).epsilon(4e-15));
      }
    }
  }
}

TEST_CASE("strengths stay in [0, 1] along every step") {
  const auto b = params(2, 0.05, 0.02, 2000, 0.5);
  for (std::uint64_t e = 0; e < 20; ++e) {
    for (double s : edge_trace_b2u(b, 3, e)) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
  const auto m = simulate_b2u(params(80, 0.05, 0.02, 300, 0.5), 4);
  for (double s : m.strengths()) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("empirical P(s >= g) at T = 3000 matches the closed form") {
  const std::size_t count = 200000;
  std::uint64_t seed = 100;
  for (double p : {0.0005, 0.003, 0.02}) {
    for (double alpha : {0.01, 0.1, 1.0}) {
      for (double g : {0.3, 0.9, 0.99}) {
        const auto samples = sample_edges_b2u(params(2, p, alpha, 3000, g), count, seed++);
        double hits = 0;
        for (double s : samples) hits += s >= g ? 1.0 : 0.0;
        const double expected = prob_active(p, alpha, g);
        const double se = std::sqrt(expected * (1.0 - expected) / count);
        CHECK(std::abs(hits / count - expected) <= 3.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("p = 0 leaves every node isolated") {
  const auto f = gcc_fractions_b2u(params(200, 0.0, 0.1, 100, 0.5), 2, 1);
  CHECK(f[0] == doctest::Approx(1.0 / 200));
}

TEST_CASE("sweep straddles the transition at the Fig. 5(a) parameters") {
  const auto b = params(1000, 0.0, 0.01, 500, 0.9);
  const double pc = critical_p(1000, 0.01, 0.9);
  const std::vector<double> grid{pc / 10, 10 * pc};
  const auto rows = gcc_sweep_b2u(b, grid, 20, 6);
  CHECK(rows[1].mean_fraction - rows[0].mean_fraction >
        5.0 * std::hypot(rows[0].std_error, rows[1].std_error));
  CHECK(rows[1].mean_fraction > 0.5);
}

TEST_CASE("sweep rows do not depend on worker count") {
  const auto b = params(150, 0.0, 0.1, 200, 0.9);
  const std::vector<double> grid{0.001, 0.004, 0.01};
  const auto a = gcc_sweep_b2u(b, grid, 6, 3, 1);
  const auto c = gcc_sweep_b2u(b, grid, 6, 3, 4);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(a[k].mean_fraction == c[k].mean_fraction);
    CHECK(a[k].std_error == c[k].std_error);
  }
}

TEST_CASE("Fig. 4 outcomes at T = 3000") {
  const double p = 1.0 / 1100;
  const auto with_gcc = gcc_fractions_b2u(params(1000, p, 0.01, 3000, 0.95), 1, 8);
  const auto without = gcc_fractions_b2u(params(1000, p, 0.01, 3000, 0.995), 1, 8);
  CHECK(with_gcc[0] > 10.0 * std::log(1000.0) / 1000.0);
  CHECK(with_gcc[0] > 5.0 * without[0]);
}
