#ifndef NFFORGE_SERIES_HPP
#define NFFORGE_SERIES_HPP

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nfforge/exponent.hpp"
#include "nfforge/rational.hpp"

namespace nfforge {

// Multivariate formal power series truncated at a total degree, with exact
// Gaussian-rational coefficients. Zero coefficients are never stored; terms
// iterate in grlex order. Series over different nvars or order never combine.
class TruncatedSeries {
 public:
  using TermMap = std::map<Exponent, Scalar>;

  TruncatedSeries() : nvars_(0), order_(0) {}
  TruncatedSeries(int nvars, int order);

  static TruncatedSeries constant(int nvars, int order, Scalar value);
  static TruncatedSeries variable(int nvars, int order, int axis);
  static TruncatedSeries monomial(int nvars, int order, const Exponent& alpha, Scalar coeff);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Scalar coeff(const Exponent& alpha) const;
  void set_coeff(const Exponent& alpha, Scalar value);
  void add_term(const Exponent& alpha, const Scalar& value);

  // Lowest total degree with a nonzero term; nullopt for the zero series.
  std::optional<int> valuation() const;
  int top_degree() const;  // highest stored degree, 0 for zero series

  TruncatedSeries homogeneous_part(int degree) const;
  TruncatedSeries truncated_above(int degree) const;  // keep terms of degree <= degree
  TruncatedSeries drop_below(int degree) const;       // keep terms of degree >= degree

  // Same terms re-housed at a different truncation order (terms beyond the
  // new order are dropped). An explicit conversion, never implicit.
  TruncatedSeries with_order(int order) const;

  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator-(const TruncatedSeries& a);
  friend TruncatedSeries operator*(const Scalar& s, const TruncatedSeries& a);

  // Truncated product: all terms of degree > order are discarded, exactly.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  TruncatedSeries pow(int k) const;
  TruncatedSeries derivative(int axis) const;

  // Substitution f(args[0], ..., args[m-1]) where f has m variables and each
  // argument is a series over a common variable set with zero constant term.
  TruncatedSeries compose(std::span<const TruncatedSeries> args) const;

  // Batch substitution sharing the monomial-power memo across all fs.
  static std::vector<TruncatedSeries> compose_many(std::span<const TruncatedSeries> fs,
                                                   std::span<const TruncatedSeries> args);

  // Multiplicative inverse 1/f for f with nonzero constant term.
  TruncatedSeries reciprocal() const;

  std::complex<double> evaluate(std::span<const std::complex<double>> point) const;
  // Real evaluation with Neumaier-compensated summation in canonical term
  // order; requires all coefficients real.
  double evaluate_real(std::span<const double> point) const;

  bool has_real_coefficients() const;

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);
  friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

  std::string str(std::span<const std::string> names = {}) const;

 private:
  void check_compatible(const TruncatedSeries& o) const;

  int nvars_;
  int order_;
  TermMap terms_;
};

TruncatedSeries mul_truncated(const TruncatedSeries& a, const TruncatedSeries& b);

}  // namespace nfforge

#endif
