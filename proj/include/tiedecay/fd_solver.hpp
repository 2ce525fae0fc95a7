#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tiedecay/walk.hpp"

namespace tiedecay {

// N + 1 points x_j = (lower + j) dx, j = 0..N, from -L up to w.
struct Grid {
  double dx = 0.0;
  std::int64_t lower = 0;  // lattice index of x_0
  std::size_t N = 0;

  double x(std::size_t j) const { return static_cast<double>(lower + static_cast<std::int64_t>(j)) * dx; }
  std::int64_t upper() const { return lower + static_cast<std::int64_t>(N); }
  std::size_t points() const { return N + 1; }

  static Grid from_bounds(double w, double L, double dx);
  static Grid from_walk(const WalkParams& params);
};

// Explicit scheme u_j' = a u_{j-1} + b u_j + c u_{j+1}.
struct SchemeCoeffs {
  double a = 0.5;
  double b = 0.0;
  double c = 0.5;

  double Delta() const { return 0.5 * (a - c); }
  void validate() const;  // ConfigurationError if any coefficient is negative

  // a = 1/2 + Delta, b = 0, c = 1/2 - Delta (one step of the walk).
  static SchemeCoeffs from_bias(double Delta);
  static SchemeCoeffs from_physical(double k, double beta, double dt, double dx);
};

enum class BoundaryRule {
  mass_conserving,  // boundary rows keep every column summing to one
  flux_ratio,       // u_N = u_{N-1} / (1 - 4 Delta) at the upper boundary
};

// Density on a grid with unit mass: sum_j u_j dx = 1.
struct Field {
  Grid grid;
  std::vector<double> u;
  std::uint64_t step = 0;

  double mass() const;
  double sup_norm() const;

  // All mass at lattice index j (density 1/dx there).
  static Field delta(const Grid& grid, std::int64_t index = 0);
  static Field uniform(const Grid& grid);
};

Field step_field(const Field& u, const SchemeCoeffs& coeffs, BoundaryRule rule = BoundaryRule::mass_conserving);
// In-place variant; `scratch` is resized as needed.
void step_field_into(std::vector<double>& u, std::vector<double>& scratch, const SchemeCoeffs& coeffs,
                     BoundaryRule rule = BoundaryRule::mass_conserving);

// Column-stochastic tridiagonal operator: entry (j, j-1) = sub[j],
// (j, j) = diag[j], (j, j+1) = super[j].
struct TridiagonalOperator {
  Grid grid;
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;

  std::size_t size() const { return diag.size(); }
  double entry(std::size_t row, std::size_t col) const;
  std::vector<double> apply(const std::vector<double>& u) const;
  double column_sum(std::size_t col) const;
};

TridiagonalOperator build_transition_matrix(const Grid& grid, const SchemeCoeffs& coeffs);

enum class StationaryBackend { power, direct };

struct StationaryOptions {
  StationaryBackend backend = StationaryBackend::power;
  double tolerance = 1e-12;  // on ||M u - u||_inf / ||u||_inf
  std::uint64_t max_iterations = 50'000'000;
};

struct StationaryResult {
  Field field;
  double residual = 0.0;
  std::uint64_t iterations = 0;
};

StationaryResult stationary_state(const TridiagonalOperator& m, const StationaryOptions& options = {});

double stationary_residual(const TridiagonalOperator& m, const std::vector<double>& u);

struct EvolveResult {
  Field field;
  double max_mass_drift = 0.0;  // max over steps of |mass - initial mass|
};

EvolveResult evolve(const Field& u0, const SchemeCoeffs& coeffs, std::uint64_t steps,
                    BoundaryRule rule = BoundaryRule::mass_conserving);

// Flushes denormals to zero on this thread while alive (restores on exit).
class FlushDenormals {
 public:
  FlushDenormals();
  ~FlushDenormals();
  FlushDenormals(const FlushDenormals&) = delete;
  FlushDenormals& operator=(const FlushDenormals&) = delete;

 private:
  unsigned saved_ = 0;
};

}  // namespace tiedecay
