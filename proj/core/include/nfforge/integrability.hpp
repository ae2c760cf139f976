#ifndef NFFORGE_INTEGRABILITY_HPP
#define NFFORGE_INTEGRABILITY_HPP

#include <optional>
#include <vector>

#include "nfforge/spectrum.hpp"
#include "nfforge/vector_field.hpp"

namespace nfforge {

// A vector field jet with its n-1 candidate first integrals. Construction by
// itself does not enforce X(F_i) = 0; the pipeline validates via
// check_integrability and keeps violating systems loadable for negative
// probes.
struct IntegrableSystem {
  VectorFieldJet x;
  std::vector<TruncatedSeries> first_integrals;
  int order = 0;
  std::optional<SpectrumClass> cls;
};

struct IntegrabilityCheck {
  bool ok = true;
  // Lowest degree at which some X(F_i) has a nonzero term.
  std::optional<int> first_violation_degree;
  std::vector<std::optional<int>> per_integral;
};

IntegrabilityCheck check_integrability(const VectorFieldJet& x,
                                       std::span<const TruncatedSeries> fs);

// Ziglin-type adaptation: polynomial combinations of the integrals whose
// lowest-degree homogeneous parts are functionally independent. Constants are
// stripped first. Relations among lowest parts are found by exact linear
// algebra on coefficient vectors up to the weighted-degree bound (default
// 2*order) and eliminated one at a time.
std::vector<TruncatedSeries> adapt_integrals(std::vector<TruncatedSeries> fs, int order,
                                             int degree_bound = -1);

struct NondegeneracyReport {
  bool cond_i = false;    // first integrals + independence as jets
  bool cond_ii = false;   // nonzero semisimple part + jet independence
  bool cond_iii = true;   // differentials of the first k integrals at O
  bool integrals_conserved = false;
  bool linear_semisimple = false;
  bool semisimple_part_nonzero = false;
  RankWitness independence;
  IntegrabilityCheck integrability;
  int zero_block_rank = 0;  // rank of dF_1..dF_k at the origin
  // Reordering of the integrals placing a differential-independent k-subset
  // first (identity when k = 0 or no subset works).
  std::vector<int> integral_order;
  std::optional<SpectrumClass> cls;
  std::optional<std::string> classification_error;

  bool all_pass() const { return cond_i && cond_ii && cond_iii; }
};

NondegeneracyReport check_nondegeneracy(const IntegrableSystem& sys);

// Weak-case reduction: in canonical coordinates with the zero block first,
// straightens F_1..F_k into the first k coordinates, restricts to the
// parameter slice, and re-centers the singular point O_c as a jet in the
// parameters.
struct ParametrizedFamily {
  int parameter_count = 0;
  int reduced_dimension = 0;
  // Straightening change (new = straighten(old)) applied to the input system.
  PolyMap straighten;
  // The reduced field at c = 0, over the last n-k coordinates.
  VectorFieldJet reduced_at_zero;
  // O_c as n-k series in the k parameters (jet solve of X(O_c) = 0).
  std::vector<TruncatedSeries> center;
  // Straightened full-system components (all n, over n vars) for evaluation
  // at float parameter values.
  std::vector<TruncatedSeries> full_components;

  // Reduced field at float parameters: y has n-k entries; the field is
  // re-centered so y = 0 is the singular point O_c.
  std::vector<double> evaluate(std::span<const double> c, std::span<const double> y) const;
  std::vector<double> center_at(std::span<const double> c) const;
};

ParametrizedFamily reduce_zero_block(const IntegrableSystem& sys, const SpectrumClass& cls);

// 2D weak-hyperbolic singular locus: solves component_x = 0 for the
// hyperbolic coordinate as a series in the zero coordinate and checks that
// the full field vanishes on the curve within the order.
struct LocusCurve {
  int hyperbolic_axis = 0;                  // coordinate solved for
  TruncatedSeries curve;                    // x(y), a one-variable series
  bool field_vanishes_on_curve = false;     // S = S_1 evidence at jet level
  TruncatedSeries other_component_on_curve; // residual of the second component
};

LocusCurve singular_locus_2d(const VectorFieldJet& x);

}  // namespace nfforge

#endif
