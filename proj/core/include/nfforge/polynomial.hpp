#ifndef NFFORGE_POLYNOMIAL_HPP
#define NFFORGE_POLYNOMIAL_HPP

#include <complex>
#include <utility>
#include <vector>

#include "nfforge/linalg.hpp"
#include "nfforge/rational.hpp"

namespace nfforge {

// Dense univariate polynomial over the rationals; c[k] is the coefficient
// of t^k. Leading zeros are trimmed; the zero polynomial has empty storage.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
  static RatPoly constant(Rat v) { return RatPoly({std::move(v)}); }
  static RatPoly monomial(int k, Rat v);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : Rat(0);
  }
  Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

  RatPoly monic() const;
  RatPoly derivative() const;

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const Rat& s, const RatPoly& a);
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

  // Euclidean division: returns (quotient, remainder).
  std::pair<RatPoly, RatPoly> divmod(const RatPoly& d) const;

  Rat evaluate(const Rat& t) const;
  std::complex<double> evaluate(std::complex<double> t) const;

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rat> c_;
};

// Monic gcd via the Euclidean algorithm.
RatPoly poly_gcd(RatPoly a, RatPoly b);

// Yun's algorithm: returns (squarefree factor, multiplicity) pairs with
// increasing multiplicity, skipping trivial factors.
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p);

// det(tI - A) by the Faddeev-LeVerrier recurrence; exact.
RatPoly characteristic_polynomial(const RatMat& a);

// Monic minimal polynomial via the first linear dependency among powers of A.
RatPoly minimal_polynomial(const RatMat& a);

// Evaluate p(A) exactly.
RatMat evaluate_at_matrix(const RatPoly& p, const RatMat& a);

// All complex roots of a squarefree polynomial by the Durand-Kerner
// iteration with Newton polish; deterministic starting points.
// Throws errc::convergence_failure if the iteration stalls.
std::vector<std::complex<double>> squarefree_roots(const RatPoly& p);

}  // namespace nfforge

#endif
