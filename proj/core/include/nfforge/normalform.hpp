#ifndef NFFORGE_NORMALFORM_HPP
#define NFFORGE_NORMALFORM_HPP

#include <optional>
#include <span>
#include <string>

#include "nfforge/integrability.hpp"
#include "nfforge/invariants.hpp"
#include "nfforge/spectrum.hpp"
#include "nfforge/vector_field.hpp"

namespace nfforge {

// Eigenvalue of the homological operator ad_{X1} on the monomial field
// x^alpha d/dx_j: <alpha, m> - m_j. Zero exactly on resonant terms.
long long homological_eigenvalue(const Exponent& alpha, int j, std::span<const long long> m);

// One degree of Poincare-Dulac: the change killing every nonresonant
// degree-d term of `current` (unique division by the homological eigenvalue;
// never a small divisor), and the untouched resonant part. Operates in
// diagonal (complexified) coordinates; `elliptic` selects the eigenvalue
// unit i.
struct PdStep {
  VectorFieldJet change;    // homogeneous degree-d tangency h; the change is id + h
  VectorFieldJet resonant;  // resonant degree-d terms, untouched
};
PdStep pd_step(const VectorFieldJet& current, int degree, std::span<const long long> mhat,
               bool elliptic);

// Splits a purely resonant homogeneous part as F_{d-1} * X1 plus a leftover
// obstruction. The per-monomial system is solved exactly; a nonzero leftover
// is data, not failure.
struct FactorExtract {
  TruncatedSeries f_increment;  // homogeneous degree d-1, resonant support
  VectorFieldJet leftover;
};
FactorExtract factor_extract(const VectorFieldJet& resonant_part, int degree,
                             std::span<const long long> mhat, bool elliptic);

struct ObstructionReport {
  int degree = 0;
  VectorFieldJet leftover;  // real coordinates
  std::string message;
};

// X = F * X1 through the truncation order: the normalizing change (identity
// linear part), the invariant factor with F(O) = 1, and the canonical linear
// part. `obstruction` is set when some degree cannot be assembled, with phi
// and factor holding the partial normalization up to that degree.
struct GeometricNormalForm {
  PolyMap phi;
  TruncatedSeries factor;
  ScalarMat linear_canonical;
  int residual_order = 0;
  std::optional<ObstructionReport> obstruction;
};

// Degree-by-degree geometric linearization. Expects the linear part of x to
// be the integer canonical matrix of cs, exactly (classify, canonicalize and
// rescale first; reduce the zero block first in the weak cases).
GeometricNormalForm geometric_normalize(const VectorFieldJet& x, const CanonicalStructure& cs);

struct NormalFormVerification {
  VectorFieldJet residual;     // pushforward(x, phi) - F * X1, recomputed
  bool residual_zero = false;
  bool factor_unit_at_origin = false;
  bool factor_invariant = false;

  bool ok() const { return residual_zero && factor_unit_at_origin && factor_invariant; }
};
NormalFormVerification verify_normal_form(const VectorFieldJet& x, const GeometricNormalForm& nf);

struct TransportResult {
  std::vector<TruncatedSeries> transported;  // F_i o phi^{-1}
  std::vector<bool> annihilated;             // (F*X1)(transported_i) = 0
  std::vector<std::optional<TruncatedSeries>> in_invariants;
};

// Transports the first integrals through the normalizing change, checks they
// stay annihilated, and (when generators are supplied) expresses them in the
// invariant generators. Throws transport_failed when an exactly conserved
// integral fails annihilation after transport.
TransportResult first_integral_transport(const IntegrableSystem& sys,
                                         const GeometricNormalForm& nf,
                                         const InvariantGenerators* gens = nullptr);

}  // namespace nfforge

#endif
