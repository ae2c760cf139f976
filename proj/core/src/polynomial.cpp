#include "nfforge/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace nfforge {

RatPoly RatPoly::monomial(int k, Rat v) {
  std::vector<Rat> c(static_cast<std::size_t>(k + 1));
  c[static_cast<std::size_t>(k)] = std::move(v);
  return RatPoly(std::move(c));
}

RatPoly RatPoly::monic() const {
  if (is_zero()) return *this;
  Rat inv = Rat(1) / leading();
  return inv * *this;
}

RatPoly RatPoly::derivative() const {
  if (c_.size() <= 1) return RatPoly();
  std::vector<Rat> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = Rat(static_cast<long>(k)) * c_[k];
  return RatPoly(std::move(d));
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < a.c_.size()) c[i] += a.c_[i];
    if (i < b.c_.size()) c[i] += b.c_[i];
  }
  return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < a.c_.size()) c[i] += a.c_[i];
    if (i < b.c_.size()) c[i] -= b.c_[i];
  }
  return RatPoly(std::move(c));
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return RatPoly();
  std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return RatPoly(std::move(c));
}

RatPoly operator*(const Rat& s, const RatPoly& a) {
  std::vector<Rat> c = a.c_;
  for (auto& v : c) v *= s;
  return RatPoly(std::move(c));
}

std::pair<RatPoly, RatPoly> RatPoly::divmod(const RatPoly& d) const {
  if (d.is_zero()) throw error(errc::internal, "polynomial division by zero");
  RatPoly r = *this;
  std::vector<Rat> q;
  if (r.degree() >= d.degree()) q.resize(static_cast<std::size_t>(r.degree() - d.degree() + 1));
  Rat lead_inv = Rat(1) / d.leading();
  while (!r.is_zero() && r.degree() >= d.degree()) {
    int shift = r.degree() - d.degree();
    Rat factor = r.leading() * lead_inv;
    q[static_cast<std::size_t>(shift)] = factor;
    for (int k = 0; k <= d.degree(); ++k)
      r.c_[static_cast<std::size_t>(k + shift)] -= factor * d.c_[static_cast<std::size_t>(k)];
    r.trim();
  }
  return {RatPoly(std::move(q)), std::move(r)};
}

Rat RatPoly::evaluate(const Rat& t) const {
  Rat acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<double> RatPoly::evaluate(std::complex<double> t) const {
  std::complex<double> acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + to_double(*it);
  return acc;
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p) {
  std::vector<std::pair<RatPoly, int>> out;
  if (p.degree() <= 0) return out;
  RatPoly a = p.monic();
  RatPoly g = poly_gcd(a, a.derivative());
  RatPoly w = a.divmod(g).first;
  int mult = 1;
  while (w.degree() > 0) {
    RatPoly y = poly_gcd(w, g);
    RatPoly factor = w.divmod(y).first;
    if (factor.degree() > 0) out.emplace_back(factor.monic(), mult);
    w = std::move(y);
    g = g.divmod(w).first;
    ++mult;
  }
  return out;
}

RatPoly characteristic_polynomial(const RatMat& a) {
  int n = a.rows();
  if (a.cols() != n) throw error(errc::dimension_mismatch, "characteristic polynomial");
  // Faddeev-LeVerrier: M_1 = A, c_{n-1} = -tr(A); M_{k+1} = A(M_k + c I).
  std::vector<Rat> coeffs(static_cast<std::size_t>(n + 1));
  coeffs[static_cast<std::size_t>(n)] = Rat(1);
  RatMat m = a;
  for (int k = 1; k <= n; ++k) {
    Rat trace(0);
    for (int i = 0; i < n; ++i) trace += m(i, i);
    Rat c = -trace / Rat(k);
    coeffs[static_cast<std::size_t>(n - k)] = c;
    if (k == n) break;
    for (int i = 0; i < n; ++i) m(i, i) += c;
    m = a * m;
  }
  return RatPoly(std::move(coeffs));
}

RatPoly minimal_polynomial(const RatMat& a) {
  int n = a.rows();
  if (a.cols() != n) throw error(errc::dimension_mismatch, "minimal polynomial");
  // Rows of K are vec(A^k); the first dependency gives the minimal polynomial.
  std::vector<RatMat> powers;
  powers.push_back(RatMat::identity(n));
  for (int d = 1; d <= n; ++d) {
    RatMat k_mat(d + 1, n * n);
    for (int p = 0; p <= d; ++p) {
      if (p == static_cast<int>(powers.size())) powers.push_back(a * powers.back());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k_mat(p, i * n + j) = powers[static_cast<std::size_t>(p)](i, j);
    }
    auto null = k_mat.transpose().nullspace();
    if (!null.empty()) {
      // Canonical dependency: the one from rref free-column structure; its
      // highest involved power is d.
      std::vector<Rat> coeffs = null.front();
      RatPoly mu{std::move(coeffs)};
      return mu.monic();
    }
  }
  throw error(errc::internal, "minimal polynomial: no dependency found");
}

RatMat evaluate_at_matrix(const RatPoly& p, const RatMat& a) {
  int n = a.rows();
  RatMat acc(n, n);
  for (int k = p.degree(); k >= 0; --k) {
    acc = a * acc;
    Rat c = p.coeff(k);
    for (int i = 0; i < n; ++i) acc(i, i) += c;
  }
  return acc;
}

std::vector<std::complex<double>> squarefree_roots(const RatPoly& p) {
  int deg = p.degree();
  if (deg <= 0) return {};
  std::vector<std::complex<double>> coeff(static_cast<std::size_t>(deg + 1));
  for (int k = 0; k <= deg; ++k) coeff[static_cast<std::size_t>(k)] = to_double(p.coeff(k));

  // Scale estimate for starting points: Cauchy bound.
  double bound = 0.0;
  for (int k = 0; k < deg; ++k)
    bound = std::max(bound, std::abs(coeff[static_cast<std::size_t>(k)] /
                                     coeff[static_cast<std::size_t>(deg)]));
  double radius = 1.0 + bound;

  std::vector<std::complex<double>> z(static_cast<std::size_t>(deg));
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> cur = seed;
  for (int i = 0; i < deg; ++i) {
    z[static_cast<std::size_t>(i)] = radius * cur;
    cur *= seed;
  }

  auto eval = [&](std::complex<double> t) {
    std::complex<double> acc = 0.0;
    for (int k = deg; k >= 0; --k) acc = acc * t + coeff[static_cast<std::size_t>(k)];
    return acc;
  };

  bool converged = false;
  for (int iter = 0; iter < 500 && !converged; ++iter) {
    double max_step = 0.0;
    for (int i = 0; i < deg; ++i) {
      std::complex<double> num = eval(z[static_cast<std::size_t>(i)]);
      std::complex<double> den = coeff[static_cast<std::size_t>(deg)];
      for (int j = 0; j < deg; ++j) {
        if (j == i) continue;
        den *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      }
      if (den == std::complex<double>(0.0, 0.0)) continue;
      std::complex<double> step = num / den;
      z[static_cast<std::size_t>(i)] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    converged = max_step < 1e-14 * std::max(1.0, radius);
  }
  if (!converged) throw error(errc::convergence_failure, "root finder did not converge");

  // Newton polish on the rational polynomial for a couple of steps.
  RatPoly dp = p.derivative();
  for (auto& root : z) {
    for (int k = 0; k < 3; ++k) {
      std::complex<double> f = p.evaluate(root);
      std::complex<double> d = dp.evaluate(root);
      if (std::abs(d) == 0.0) break;
      root -= f / d;
    }
  }
  std::sort(z.begin(), z.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return z;
}

}  // namespace nfforge
