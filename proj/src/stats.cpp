#include "tiedecay/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "tiedecay/errors.hpp"

namespace tiedecay {

void RunningStats::add(double x) noexcept {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double d = other.mean_ - mean_;
  mean_ += d * nb / n;
  m2_ += other.m2_ + d * d * na * nb / n;
  n_ += other.n_;
}

double RunningStats::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::std_error() const noexcept {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

MeanStderr mean_stderr(std::span<const double> values) {
  RunningStats s;
  for (double v : values) s.add(v);
  return {s.mean(), s.std_error()};
}

std::optional<double> locate_crossing(std::span<const double> xs, std::span<const double> ys,
                                      double level, bool log_x) {
  if (xs.size() != ys.size()) throw InputError("locate_crossing: size mismatch");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double y0 = ys[i] - level;
    const double y1 = ys[i + 1] - level;
    if (y0 == 0.0) return xs[i];
    if ((y0 < 0.0) == (y1 < 0.0) && y1 != 0.0) continue;
    const double t = y0 / (y0 - y1);
    if (log_x) {
      const double a = std::log(xs[i]);
      const double b = std::log(xs[i + 1]);
      return std::exp(a + t * (b - a));
    }
    return xs[i] + t * (xs[i + 1] - xs[i]);
  }
  return std::nullopt;
}

double chi_square_p_value(double statistic, double dof) {
  if (dof <= 0.0) throw DomainError("chi_square_p_value: dof must be positive");
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquareResult chi_square_pooled(std::span<const double> observed, std::span<const double> expected,
                                  double min_expected) {
  if (observed.size() != expected.size()) throw InputError("chi_square_pooled: size mismatch");
  std::vector<double> obs, exp;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += expected[i];
    if (e >= min_expected) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  // leftover tail goes into the last pooled bin
  if (e > 0.0 || o > 0.0) {
    if (exp.empty()) {
      obs.push_back(o);
      exp.push_back(e);
    } else {
      obs.back() += o;
      exp.back() += e;
    }
  }
  ChiSquareResult r;
  r.bins = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] <= 0.0) continue;
    const double d = obs[i] - exp[i];
    r.statistic += d * d / exp[i];
  }
  r.dof = static_cast<double>(r.bins) - 1.0;
  r.p_value = r.dof > 0.0 ? chi_square_p_value(r.statistic, r.dof) : 1.0;
  return r;
}

double ks_critical_value(std::size_t n, double level) {
  if (n == 0) throw InputError("ks_critical_value: empty sample");
  double c;
  if (level == 0.10) c = 1.2238;
  else if (level == 0.05) c = 1.3581;
  else if (level == 0.01) c = 1.6276;
  else if (level == 0.001) c = 1.9495;
  else throw DomainError("ks_critical_value: unsupported level");
  return c / std::sqrt(static_cast<double>(n));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace tiedecay
