#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tiedecay {

// Welford accumulator. merge() uses the pairwise update of Chan et al.;
// merging in a fixed order keeps results bit-reproducible.
class RunningStats {
 public:
  void add(double x) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::uint64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // unbiased (n - 1)
  double std_error() const noexcept;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanStderr mean_stderr(std::span<const double> values);

// x where the piecewise-linear curve through (xs, ys) first crosses `level`
// from above (ys decreasing in xs) or from below. Interpolates in log(x) when
// `log_x` is set. Empty when the curve never reaches the level.
std::optional<double> locate_crossing(std::span<const double> xs, std::span<const double> ys,
                                      double level, bool log_x = false);

// Upper-tail probability of a chi-square statistic with `dof` degrees of freedom.
double chi_square_p_value(double statistic, double dof);

// Pearson statistic with adjacent bins pooled until every expected count is
// at least `min_expected`. `expected` are counts, not probabilities.
struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::size_t bins = 0;
};
ChiSquareResult chi_square_pooled(std::span<const double> observed, std::span<const double> expected,
                                  double min_expected = 5.0);

// Asymptotic two-sided Kolmogorov-Smirnov critical value for sample size n.
// Supported levels: 0.10, 0.05, 0.01, 0.001.
double ks_critical_value(std::size_t n, double level);

double normal_cdf(double z);

}  // namespace tiedecay
