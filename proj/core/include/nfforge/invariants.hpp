#ifndef NFFORGE_INVARIANTS_HPP
#define NFFORGE_INVARIANTS_HPP

#include <vector>

#include "nfforge/series.hpp"
#include "nfforge/spectrum.hpp"

namespace nfforge {

// The single resonance relation <a, m> = 0 over nonnegative integer vectors.
struct ResonanceProblem {
  std::vector<long long> m;
};

// Minimal generating set of the solution monoid, sorted in grlex order.
struct HilbertBasis {
  std::vector<Exponent> generators;
};

// Pottier-style completion: breadth-first closure from the unit vectors,
// extending only in directions that move the residue toward zero and pruning
// everything dominated by a found generator. The frontier emptying out is the
// saturation certificate; degree_cap is a hard safety bound.
HilbertBasis hilbert_basis(const ResonanceProblem& problem, int degree_cap = 24);

// Monomial generators of the polynomial first-integral ring of the canonical
// linear field, with their real polynomial forms. For an elliptic pair,
// z zbar realifies to x^2 + y^2 and a mixed monomial contributes its real and
// imaginary parts.
struct InvariantGenerators {
  CanonicalStructure structure;
  int order = 0;
  // Hilbert generators in complexified coordinates (degree <= order).
  std::vector<Exponent> monomials;
  // Real polynomial generators over the canonical real coordinates.
  std::vector<TruncatedSeries> real_forms;
  std::vector<int> degrees;  // homogeneous degree of each real form
};

InvariantGenerators invariant_generators(const CanonicalStructure& cs, const HilbertBasis& hb,
                                         int order);

// Writes an invariant jet as a series in the real generators:
// compose(result, real_forms) == f within the order. Picks the
// lexicographically-first reduced-echelon solution degree by degree.
// Throws not_invariant if f is not annihilated by the canonical linear field,
// no_representation if some degree slice cannot be matched.
TruncatedSeries express_in_invariants(const TruncatedSeries& f, const InvariantGenerators& gens);

}  // namespace nfforge

#endif
