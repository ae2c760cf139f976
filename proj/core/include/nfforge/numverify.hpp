#ifndef NFFORGE_NUMVERIFY_HPP
#define NFFORGE_NUMVERIFY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "nfforge/normalform.hpp"
#include "nfforge/ode.hpp"
#include "nfforge/series.hpp"
#include "nfforge/vector_field.hpp"

namespace nfforge {

// Flattened double-precision form of an exact series: coefficients converted
// once, terms kept in canonical (grlex) order, evaluation with Neumaier
// summation and integer powers. Deterministic on a given host.
class CompiledSeries {
 public:
  CompiledSeries() = default;
  explicit CompiledSeries(const TruncatedSeries& s);

  int nvars() const { return nvars_; }
  double evaluate(std::span<const double> x) const;

 private:
  int nvars_ = 0;
  std::vector<double> coeff_;
  std::vector<std::int32_t> expo_;  // nvars entries per term
};

// Float evaluator for X at points, optionally divided by a scalar factor
// (the Y = X/F construction) and optionally perturbed by a user-supplied
// additive term for stress tests.
class NumericField {
 public:
  using Perturbation = std::function<void(std::span<const double> x, std::span<double> add)>;

  explicit NumericField(const VectorFieldJet& x);
  NumericField(const VectorFieldJet& x, const TruncatedSeries& divisor);

  int dimension() const { return n_; }
  void set_perturbation(Perturbation p) { perturb_ = std::move(p); }

  void evaluate(std::span<const double> x, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> x) const;
  OdeRhs rhs() const;

 private:
  int n_ = 0;
  std::vector<CompiledSeries> comps_;
  std::optional<CompiledSeries> divisor_;
  Perturbation perturb_;
};

// Max relative drift of the integrals along the trajectory, sampled at the
// step endpoints plus a uniform dense grid.
double conservation_residual(const Trajectory& traj, std::span<const CompiledSeries> integrals,
                             int dense_samples = 256);

struct PeriodOptions {
  IntegrateOptions integrate{1e-12, 1e-14, 2.0, 2000000, 0.0};
  double time_tol = 1e-10;          // root tolerance on the return time
  double crossing_speed_min = 1e-12;  // grazing-crossing rejection
};

struct PeriodEstimate {
  std::vector<double> x0;
  double period = 0.0;
  double return_distance = 0.0;
  std::vector<double> section_normal;
  int crossings_seen = 0;
};

// First positive-oriented return to the section through x0 orthogonal to
// f(x0). Integrates to 3*expected_period and throws no_return when no
// crossing shows up.
PeriodEstimate detect_period(const NumericField& f, std::span<const double> x0,
                             double expected_period, const PeriodOptions& opts = {});

struct ResidualCurve {
  std::vector<double> radii;
  std::vector<double> values;
  double slope = 0.0;       // log-log fit over points above the noise floor
  int fitted_points = 0;
  double noise_floor = 0.0;
  bool pass = false;
};

struct FlatnessOptions {
  PeriodOptions period;
  double exponent = 4.0;      // PASS when the slope exceeds this
  double noise_floor = 1e-9;  // ... or every deviation sits below this
  std::vector<double> direction;  // initial-point direction, default e1
};

// Deviations |T(r) - 2 pi / lambda| over a radius ladder; operationalizes
// "flat" as a log-log slope beyond the configured exponent at desk scale.
ResidualCurve period_flatness_scan(const NumericField& f, double lambda,
                                   std::span<const double> radii,
                                   const FlatnessOptions& opts = {});

struct ConjugacyScanOptions {
  int samples = 16;
  std::uint64_t seed = 0;
  double noise_floor = 5e-17;
  double min_slope = 0.0;  // PASS threshold; callers pin N + 0.5
};

// Max norm of DPhi(x) X(x) - F(Phi x) L Phi(x) over random sample points per
// radius, all in floats; the truncation residual must decay like r^{N+1}.
ResidualCurve conjugacy_residual_scan(const VectorFieldJet& x, const GeometricNormalForm& nf,
                                      std::span<const double> radii,
                                      const ConjugacyScanOptions& opts = {});

struct LocusScan {
  std::vector<double> y;
  std::vector<double> x;            // root of the hyperbolic component
  std::vector<double> field_norm;   // full field norm at the locus point
  double max_field_norm = 0.0;
  double max_second_difference = 0.0;  // divided-difference regularity proxy
};

// For each y in the grid, root-finds the hyperbolic component inside the
// cone |x| <= |y| and reports the locus and the field norm on it.
LocusScan singular_locus_scan_2d(const NumericField& f, std::span<const double> ygrid,
                                 int hyperbolic_axis = 0, double root_tol = 1e-13);

// Least-squares log-log slope over the points with value > floor.
ResidualCurve fit_decay(std::span<const double> radii, std::span<const double> values,
                        double noise_floor, double pass_slope);

// Scan parallelism: hardware concurrency capped by NFFORGE_THREADS.
int scan_thread_cap();
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace nfforge

#endif
