#ifndef NFFORGE_RATIONAL_HPP
#define NFFORGE_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include "nfforge/errors.hpp"

namespace nfforge {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

// Parses "p", "-p", or "p/q" into a canonical rational. Rejects zero
// denominators and malformed literals instead of letting GMP abort.
Rat parse_rational(std::string_view text);

// Canonical form: "p" when the denominator is 1, else "p/q".
std::string to_string(const Rat& r);

double to_double(const Rat& r);

// Exact k-th root when it exists (k >= 1; r >= 0 for even k).
std::optional<Rat> rational_kth_root(const Rat& r, int k);

inline bool is_zero(const Rat& r) { return r.is_zero(); }

// Gaussian rational: the exact coefficient field for complexified
// coordinates. Equality is decidable and all arithmetic is exact.
struct Scalar {
  Rat re;
  Rat im;

  Scalar() = default;
  Scalar(Rat r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Scalar(long long r) : re(r) {}       // NOLINT(google-explicit-constructor)
  Scalar(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static Scalar i() { return Scalar(Rat(0), Rat(1)); }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  Scalar conj() const { return Scalar(re, -im); }
  Rat norm2() const { return re * re + im * im; }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(-a.re, -a.im); }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.im.is_zero()) {
      if (b.im.is_zero()) return Scalar(a.re * b.re);
      return Scalar(a.re * b.re, a.re * b.im);
    }
    if (b.im.is_zero()) return Scalar(a.re * b.re, a.im * b.re);
    return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }

  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw error(errc::internal, "Scalar division by zero");
    if (b.im.is_zero()) return Scalar(a.re / b.re, a.im / b.re);
    Rat n = b.norm2();
    Scalar prod = a * b.conj();
    return Scalar(prod.re / n, prod.im / n);
  }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
};

inline bool is_zero(const Scalar& s) { return s.is_zero(); }

std::string to_string(const Scalar& s);

}  // namespace nfforge

#endif
