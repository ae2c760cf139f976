#ifndef NFFORGE_SPECTRUM_HPP
#define NFFORGE_SPECTRUM_HPP

#include <complex>
#include <string>
#include <vector>

#include "nfforge/linalg.hpp"
#include "nfforge/polynomial.hpp"

namespace nfforge {

// Numeric spectrum of a real rational matrix. Canonical order: exact zeros
// first, then descending by (re, im). classify_spectrum preserves whatever
// order it is given.
struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;

  struct Distinct {
    std::complex<double> value;
    int multiplicity;
  };
  std::vector<Distinct> distinct;
};

Spectrum make_spectrum(std::vector<std::complex<double>> values);

enum class SpectrumCase {
  StrongHyperbolic,
  WeakHyperbolic,
  StrongElliptic,
  WeakElliptic,
};

const char* to_string(SpectrumCase c);

// One of the four cases, with the primitive integer eigenvalue vector m
// (gcd of nonzero |m_i| is 1) and the positive base lambda such that the
// eigenvalues are m_i*lambda (hyperbolic) or i*m_i*lambda (elliptic).
struct SpectrumClass {
  SpectrumCase kind;
  int zero_count = 0;  // k
  std::vector<long long> m;
  double lambda = 0.0;

  bool hyperbolic() const {
    return kind == SpectrumCase::StrongHyperbolic || kind == SpectrumCase::WeakHyperbolic;
  }
  bool elliptic() const { return !hyperbolic(); }
};

struct ClassifyOptions {
  double tol = 1e-9;          // scale-free zero / axis test
  int max_denominator = 64;   // continued-fraction denominator bound
  double ratio_tol = 1e-7;    // acceptance tolerance on |ratio - p/q|
};

// Characteristic polynomial + squarefree factoring + Durand-Kerner with
// Newton polish; each eigenvalue accurate to ~1e-13 relative at desk scale.
Spectrum eigenvalues_numeric(const RatMat& a);

// True iff the exact minimal polynomial over Q is squarefree.
bool semisimplicity_check(const RatMat& a);

// Throws mixed_spectrum / non_commensurable / all_zero on violated
// hypotheses.
SpectrumClass classify_spectrum(const Spectrum& s, const ClassifyOptions& opts = {});

// Canonical shape of the linearized problem shared by the invariant-ring and
// normal-form machinery. Real coordinate layout: zero block first, then
// either all hyperbolic axes (m descending) or all elliptic pairs
// (m ascending).
struct CanonicalStructure {
  SpectrumCase kind;
  int n = 0;           // real dimension
  int zero_count = 0;  // k
  bool elliptic = false;
  // Hyperbolic: one integer per nonzero axis, descending.
  // Elliptic: one positive integer per 2x2 block, ascending.
  std::vector<long long> blocks;
  // Integer eigenvector per complex coordinate: k zeros, then the block
  // values (hyperbolic) or (m, -m) per pair (elliptic).
  std::vector<long long> mhat;

  int complex_dim() const { return static_cast<int>(mhat.size()); }
};

CanonicalStructure canonical_structure(const SpectrumClass& cls);

// Integer canonical matrix: zero block, then diag(blocks) or elliptic blocks
// m*[[0,-1],[1,0]].
RatMat integer_canonical_matrix(const CanonicalStructure& cs);

// Complexification z = W x for the canonical real coordinates, plus its
// exact inverse.
ScalarMat complexification_matrix(const CanonicalStructure& cs);
ScalarMat complexification_inverse(const CanonicalStructure& cs);

struct Canonicalization {
  RatMat basis;            // T, exact rational change of basis
  RatMat canonical;        // T^{-1} A T, equals lambda * integer form exactly
  Rat lambda;              // exact positive time-rescale factor
  RatMat integer_form;     // canonical / lambda
  CanonicalStructure structure;
};

// Exact rational change of basis to the canonical form. Throws
// not_canonicalizable when lambda or the eigenvectors are not rational.
Canonicalization canonicalize_linear_part(const RatMat& a, const SpectrumClass& cls);

}  // namespace nfforge

#endif
