#include "tiedecay/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tiedecay/errors.hpp"

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace tiedecay {

namespace {

std::int64_t snap_index(double ratio, const char* what) {
  const double r = std::round(ratio);
  if (std::abs(ratio - r) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw ConfigurationError(std::string(what) + " must be a whole number of grid steps");
  }
  return static_cast<std::int64_t>(r);
}

double sup(const std::vector<double>& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

double sum_mass(const std::vector<double>& u, double dx) {
  double s = 0.0;
  for (double v : u) s += v;
  return s * dx;
}

}  // namespace

FlushDenormals::FlushDenormals() {
#if defined(__SSE__)
  saved_ = _mm_getcsr();
  _mm_setcsr(saved_ | 0x8040);  // flush-to-zero and denormals-are-zero
#endif
}

FlushDenormals::~FlushDenormals() {
#if defined(__SSE__)
  _mm_setcsr(saved_);
#endif
}

Grid Grid::from_bounds(double w, double L, double dx) {
  if (!(dx > 0.0)) throw ConfigurationError("grid: dx must be positive");
  if (!(L > 0.0) || std::isinf(L)) throw ConfigurationError("grid: L must be positive and finite");
  if (!std::isfinite(w)) throw ConfigurationError("grid: w must be finite");
  Grid g;
  g.dx = dx;
  const std::int64_t upper = snap_index(w / dx, "w");
  g.lower = -static_cast<std::int64_t>(std::ceil(L / dx - 1e-9));
  if (upper - g.lower < 2) throw ConfigurationError("grid: need at least three points");
  g.N = static_cast<std::size_t>(upper - g.lower);
  return g;
}

Grid Grid::from_walk(const WalkParams& params) { return from_bounds(params.w, params.L, params.dx); }

void SchemeCoeffs::validate() const {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) {
    throw ConfigurationError("scheme coefficients must be non-negative (a=" + std::to_string(a) +
                             ", b=" + std::to_string(b) + ", c=" + std::to_string(c) + ")");
  }
}

SchemeCoeffs SchemeCoeffs::from_bias(double Delta) {
  if (!(Delta >= -0.5 && Delta <= 0.5)) throw ConfigurationError("scheme: |Delta| must not exceed 1/2");
  SchemeCoeffs s;
  s.a = 0.5 + Delta;
  s.c = 1.0 - s.a;  // exact, so a + c == 1 in floating point
  s.b = 0.0;
  return s;
}

SchemeCoeffs SchemeCoeffs::from_physical(double k, double beta, double dt, double dx) {
  if (!(dx > 0.0 && dt > 0.0)) throw ConfigurationError("scheme: dx and dt must be positive");
  const double r = k * dt / (dx * dx);
  SchemeCoeffs s;
  s.a = r + 2.0 * beta * k * dt / dx;
  s.b = 1.0 - 2.0 * r;
  s.c = r - 2.0 * k * beta * dt / dx;
  return s;
}

double Field::mass() const { return sum_mass(u, grid.dx); }
double Field::sup_norm() const { return sup(u); }

Field Field::delta(const Grid& grid, std::int64_t index) {
  if (index < grid.lower || index > grid.upper()) throw InputError("Field::delta: index outside the grid");
  Field f{grid, std::vector<double>(grid.points(), 0.0), 0};
  f.u[static_cast<std::size_t>(index - grid.lower)] = 1.0 / grid.dx;
  return f;
}

Field Field::uniform(const Grid& grid) {
  return Field{grid, std::vector<double>(grid.points(), 1.0 / (grid.dx * static_cast<double>(grid.points()))), 0};
}

void step_field_into(std::vector<double>& u, std::vector<double>& next, const SchemeCoeffs& co,
                     BoundaryRule rule) {
  co.validate();
  const std::size_t n = u.size();
  if (n < 3) throw InputError("step_field: need at least three points");
  next.resize(n);
  const double a = co.a, b = co.b, c = co.c;
  const std::size_t N = n - 1;
  next[0] = (b + c) * u[0] + c * u[1];
  for (std::size_t j = 1; j < N; ++j) next[j] = a * u[j - 1] + b * u[j] + c * u[j + 1];
  if (rule == BoundaryRule::mass_conserving) {
    next[N] = (a + b) * u[N] + a * u[N - 1];
  } else {
    const double denom = 1.0 - 4.0 * co.Delta();
    if (!(denom > 0.0)) throw ConfigurationError("flux-ratio boundary needs Delta < 1/4");
    next[N] = next[N - 1] / denom;
  }
  u.swap(next);
}

Field step_field(const Field& u, const SchemeCoeffs& coeffs, BoundaryRule rule) {
  Field out = u;
  std::vector<double> scratch;
  step_field_into(out.u, scratch, coeffs, rule);
  ++out.step;
  return out;
}

double TridiagonalOperator::entry(std::size_t row, std::size_t col) const {
  if (row >= size() || col >= size()) throw InputError("TridiagonalOperator: index out of range");
  if (row == col) return diag[row];
  if (col + 1 == row) return sub[row];
  if (row + 1 == col) return super[row];
  return 0.0;
}

double TridiagonalOperator::column_sum(std::size_t col) const {
  double s = diag[col];
  if (col > 0) s += super[col - 1];
  if (col + 1 < size()) s += sub[col + 1];
  return s;
}

std::vector<double> TridiagonalOperator::apply(const std::vector<double>& u) const {
  const std::size_t n = size();
  if (u.size() != n) throw InputError("TridiagonalOperator::apply: size mismatch");
  std::vector<double> out(n);
  out[0] = diag[0] * u[0] + super[0] * u[1];
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = sub[j] * u[j - 1] + diag[j] * u[j] + super[j] * u[j + 1];
  out[n - 1] = diag[n - 1] * u[n - 1] + sub[n - 1] * u[n - 2];
  return out;
}

TridiagonalOperator build_transition_matrix(const Grid& grid, const SchemeCoeffs& co) {
  co.validate();
  if (!(co.a > 0.0 && co.c > 0.0)) {
    throw ConfigurationError("transition matrix needs Delta < 1/2 (positive off-diagonal band)");
  }
  const std::size_t n = grid.points();
  if (n < 3) throw ConfigurationError("transition matrix needs at least three points");
  TridiagonalOperator m;
  m.grid = grid;
  m.sub.assign(n, co.a);
  m.diag.assign(n, co.b);
  m.super.assign(n, co.c);
  m.sub[0] = 0.0;
  m.super[n - 1] = 0.0;
  m.diag[0] = co.b + co.c;
  m.diag[n - 1] = co.a + co.b;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = m.column_sum(j);
    if (std::abs(s - 1.0) > 1e-14) {
      throw ConfigurationError("transition matrix column " + std::to_string(j) + " sums to " + std::to_string(s));
    }
  }
  return m;
}

double stationary_residual(const TridiagonalOperator& m, const std::vector<double>& u) {
  const auto mu = m.apply(u);
  double r = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) r = std::max(r, std::abs(mu[j] - u[j]));
  const double scale = sup(u);
  return scale > 0.0 ? r / scale : std::numeric_limits<double>::infinity();
}

namespace {

void normalize(std::vector<double>& u, double dx) {
  const double mass = sum_mass(u, dx);
  for (double& v : u) v /= mass;
}

StationaryResult solve_direct(const TridiagonalOperator& m, const StationaryOptions& options) {
  // birth-death chain: detailed balance u_{j+1} M(j, j+1) = u_j M(j+1, j)
  const std::size_t n = m.size();
  std::vector<double> logu(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) logu[j + 1] = logu[j] + std::log(m.sub[j + 1]) - std::log(m.super[j]);
  const double top = *std::max_element(logu.begin(), logu.end());
  std::vector<double> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = std::exp(logu[j] - top);
  normalize(u, m.grid.dx);
  StationaryResult r{Field{m.grid, std::move(u), 0}, 0.0, 1};
  r.residual = stationary_residual(m, r.field.u);
  if (!(r.residual <= options.tolerance)) {
    throw NumericalError("stationary_state: direct solve residual " + std::to_string(r.residual) +
                             " exceeds tolerance",
                         r.residual);
  }
  return r;
}

StationaryResult solve_power(const TridiagonalOperator& m, const StationaryOptions& options) {
  // lazy iteration u <- (u + M u) / 2 avoids the eigenvalue near -1 that the
  // b = 0 scheme has on a bipartite lattice
  FlushDenormals ftz;
  const std::size_t n = m.size();
  std::vector<double> u(n, 1.0 / (m.grid.dx * static_cast<double>(n)));
  std::vector<double> mu(n);
  double residual = std::numeric_limits<double>::infinity();
  constexpr std::uint64_t kCheckEvery = 256;
  std::uint64_t it = 0;
  while (it < options.max_iterations) {
    for (std::uint64_t k = 0; k < kCheckEvery && it < options.max_iterations; ++k, ++it) {
      mu[0] = m.diag[0] * u[0] + m.super[0] * u[1];
      for (std::size_t j = 1; j + 1 < n; ++j) mu[j] = m.sub[j] * u[j - 1] + m.diag[j] * u[j] + m.super[j] * u[j + 1];
      mu[n - 1] = m.diag[n - 1] * u[n - 1] + m.sub[n - 1] * u[n - 2];
      for (std::size_t j = 0; j < n; ++j) u[j] = 0.5 * (u[j] + mu[j]);
    }
    normalize(u, m.grid.dx);
    residual = stationary_residual(m, u);
    if (residual <= options.tolerance) return {Field{m.grid, u, 0}, residual, it};
  }
  throw NumericalError("stationary_state: power iteration stopped after " + std::to_string(it) +
                           " iterations with residual " + std::to_string(residual),
                       residual);
}

}  // namespace

StationaryResult stationary_state(const TridiagonalOperator& m, const StationaryOptions& options) {
  if (m.size() < 3) throw InputError("stationary_state: operator too small");
  return options.backend == StationaryBackend::direct ? solve_direct(m, options) : solve_power(m, options);
}

EvolveResult evolve(const Field& u0, const SchemeCoeffs& coeffs, std::uint64_t steps, BoundaryRule rule) {
  FlushDenormals ftz;
  EvolveResult r{u0, 0.0};
  const double initial = u0.mass();
  std::vector<double> scratch;
  for (std::uint64_t i = 0; i < steps; ++i) {
    step_field_into(r.field.u, scratch, coeffs, rule);
    r.max_mass_drift = std::max(r.max_mass_drift, std::abs(sum_mass(r.field.u, u0.grid.dx) - initial));
  }
  r.field.step = u0.step + steps;
  return r;
}

}  // namespace tiedecay
