#include "nfforge/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace nfforge {

const char* to_string(SpectrumCase c) {
  switch (c) {
    case SpectrumCase::StrongHyperbolic: return "StrongHyperbolic";
    case SpectrumCase::WeakHyperbolic: return "WeakHyperbolic";
    case SpectrumCase::StrongElliptic: return "StrongElliptic";
    case SpectrumCase::WeakElliptic: return "WeakElliptic";
  }
  return "?";
}

Spectrum make_spectrum(std::vector<std::complex<double>> values) {
  Spectrum s;
  s.eigenvalues = std::move(values);
  for (const auto& v : s.eigenvalues) {
    bool merged = false;
    for (auto& d : s.distinct) {
      if (std::abs(d.value - v) < 1e-9 * std::max(1.0, std::abs(v))) {
        ++d.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) s.distinct.push_back({v, 1});
  }
  return s;
}

Spectrum eigenvalues_numeric(const RatMat& a) {
  int n = a.rows();
  if (a.cols() != n) throw error(errc::dimension_mismatch, "eigenvalues of non-square matrix");
  if (n > 8) throw error(errc::dimension_mismatch, "eigenvalues_numeric: desk scale is n <= 8");

  RatPoly chi = characteristic_polynomial(a);

  // Exact zero-eigenvalue multiplicity: trailing zero coefficients.
  int zero_mult = 0;
  while (chi.coeff(zero_mult).is_zero()) ++zero_mult;
  std::vector<Rat> shifted(chi.coeffs().begin() + zero_mult, chi.coeffs().end());
  RatPoly rest{std::move(shifted)};

  std::vector<std::complex<double>> values(static_cast<std::size_t>(zero_mult), {0.0, 0.0});
  for (const auto& [factor, mult] : squarefree_decomposition(rest)) {
    for (const auto& root : squarefree_roots(factor))
      for (int i = 0; i < mult; ++i) values.push_back(root);
  }

  std::stable_sort(values.begin() + zero_mult, values.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return make_spectrum(std::move(values));
}

bool semisimplicity_check(const RatMat& a) {
  RatPoly mu = minimal_polynomial(a);
  return poly_gcd(mu, mu.derivative()).degree() == 0;
}

namespace {

// Best continued-fraction convergent p/q with q <= max_den and
// |x - p/q| <= tol; nullopt if none qualifies.
std::optional<std::pair<long long, long long>> rationalize(double x, int max_den, double tol) {
  long long p_prev = 1, q_prev = 0;
  long long p_cur = static_cast<long long>(std::floor(x));
  long long q_cur = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(x - static_cast<double>(p_cur) / static_cast<double>(q_cur)) <= tol)
      return std::make_pair(p_cur, q_cur);
    if (frac == 0.0) break;
    double inv = 1.0 / frac;
    double whole = std::floor(inv);
    if (whole > 1e15) break;
    long long a = static_cast<long long>(whole);
    long long p_next = a * p_cur + p_prev;
    long long q_next = a * q_cur + q_prev;
    if (q_next > max_den) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    frac = inv - whole;
  }
  if (q_cur <= max_den &&
      std::abs(x - static_cast<double>(p_cur) / static_cast<double>(q_cur)) <= tol)
    return std::make_pair(p_cur, q_cur);
  return std::nullopt;
}

std::vector<Rat> elementary_symmetric_all(const std::vector<long long>& values) {
  std::vector<Rat> e(values.size() + 1);
  e[0] = Rat(1);
  std::size_t used = 0;
  for (long long v : values) {
    ++used;
    for (std::size_t k = used; k >= 1; --k) e[k] += Rat(v) * e[k - 1];
  }
  return e;
}

bool independent_of(const std::vector<std::vector<Rat>>& chosen, const std::vector<Rat>& cand) {
  if (chosen.empty()) return true;
  int n = static_cast<int>(cand.size());
  RatMat m(n, static_cast<int>(chosen.size()) + 1);
  for (int r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < chosen.size(); ++c)
      m(r, static_cast<int>(c)) = chosen[c][static_cast<std::size_t>(r)];
    m(r, static_cast<int>(chosen.size())) = cand[static_cast<std::size_t>(r)];
  }
  return m.rank() == static_cast<int>(chosen.size()) + 1;
}

}  // namespace

SpectrumClass classify_spectrum(const Spectrum& s, const ClassifyOptions& opts) {
  const auto& ev = s.eigenvalues;
  if (ev.empty()) throw error(errc::all_zero, "empty spectrum");
  double scale = 0.0;
  for (const auto& v : ev) scale = std::max(scale, std::abs(v));
  if (scale == 0.0)
    throw error(errc::all_zero, "semisimple part of the linear part vanishes (condition ii)");

  int n = static_cast<int>(ev.size());
  std::vector<bool> zero(static_cast<std::size_t>(n), false);
  bool any_real = false, any_imag = false;
  for (int i = 0; i < n; ++i) {
    const auto& v = ev[static_cast<std::size_t>(i)];
    if (std::abs(v) < opts.tol * scale) {
      zero[static_cast<std::size_t>(i)] = true;
      continue;
    }
    bool is_real = std::abs(v.imag()) <= opts.tol * scale;
    bool is_imag = std::abs(v.real()) <= opts.tol * scale;
    if (!is_real && !is_imag)
      throw error(errc::mixed_spectrum, "eigenvalue neither real nor imaginary within tolerance");
    if (is_real) any_real = true;
    if (is_imag) any_imag = true;
  }
  if (any_real && any_imag)
    throw error(errc::mixed_spectrum, "real and imaginary nonzero eigenvalues coexist");
  if (!any_real && !any_imag)
    throw error(errc::all_zero, "semisimple part of the linear part vanishes (condition ii)");
  bool elliptic = any_imag;

  // Real line coordinates of the nonzero eigenvalues.
  std::vector<double> line(static_cast<std::size_t>(n), 0.0);
  int ref = -1;
  for (int i = 0; i < n; ++i) {
    if (zero[static_cast<std::size_t>(i)]) continue;
    const auto& v = ev[static_cast<std::size_t>(i)];
    line[static_cast<std::size_t>(i)] = elliptic ? v.imag() : v.real();
    if (ref < 0 || std::abs(line[static_cast<std::size_t>(i)]) >
                       std::abs(line[static_cast<std::size_t>(ref)]))
      ref = i;
  }
  double r_ref = line[static_cast<std::size_t>(ref)];

  long long den_lcm = 1;
  std::vector<std::pair<long long, long long>> fractions(static_cast<std::size_t>(n), {0, 1});
  for (int i = 0; i < n; ++i) {
    if (zero[static_cast<std::size_t>(i)]) continue;
    double ratio = line[static_cast<std::size_t>(i)] / r_ref;
    auto pq = rationalize(ratio, opts.max_denominator, opts.ratio_tol);
    if (!pq)
      throw error(errc::non_commensurable,
                  "eigenvalue ratio is not rational within the denominator bound");
    fractions[static_cast<std::size_t>(i)] = *pq;
    den_lcm = std::lcm(den_lcm, pq->second);
  }

  std::vector<long long> m(static_cast<std::size_t>(n), 0);
  long long g = 0;
  for (int i = 0; i < n; ++i) {
    if (zero[static_cast<std::size_t>(i)]) continue;
    auto [p, q] = fractions[static_cast<std::size_t>(i)];
    m[static_cast<std::size_t>(i)] = p * (den_lcm / q);
    g = std::gcd(g, std::llabs(m[static_cast<std::size_t>(i)]));
  }
  if (g == 0) throw error(errc::internal, "no nonzero eigenvalue after rationalization");
  for (auto& v : m) v /= g;
  double lambda = std::abs(r_ref) * static_cast<double>(g) / static_cast<double>(den_lcm);
  if (r_ref < 0)
    for (auto& v : m) v = -v;

  SpectrumClass cls;
  cls.zero_count = static_cast<int>(std::count(zero.begin(), zero.end(), true));
  cls.m = std::move(m);
  cls.lambda = lambda;
  if (elliptic)
    cls.kind = cls.zero_count ? SpectrumCase::WeakElliptic : SpectrumCase::StrongElliptic;
  else
    cls.kind = cls.zero_count ? SpectrumCase::WeakHyperbolic : SpectrumCase::StrongHyperbolic;
  return cls;
}

CanonicalStructure canonical_structure(const SpectrumClass& cls) {
  CanonicalStructure cs;
  cs.kind = cls.kind;
  cs.n = static_cast<int>(cls.m.size());
  cs.zero_count = cls.zero_count;
  cs.elliptic = cls.elliptic();

  std::vector<long long> nonzero;
  for (long long v : cls.m)
    if (v != 0) nonzero.push_back(v);

  if (cs.elliptic) {
    std::map<long long, int> counts;
    for (long long v : nonzero) ++counts[v];
    for (const auto& [v, count] : counts) {
      if (v <= 0) continue;
      auto it = counts.find(-v);
      if (it == counts.end() || it->second != count)
        throw error(errc::not_canonicalizable, "elliptic eigenvalues not in conjugate pairs");
      for (int i = 0; i < count; ++i) cs.blocks.push_back(v);
    }
    if (2 * cs.blocks.size() != nonzero.size())
      throw error(errc::not_canonicalizable, "elliptic eigenvalues not in conjugate pairs");
    std::sort(cs.blocks.begin(), cs.blocks.end());
  } else {
    cs.blocks = nonzero;
    std::sort(cs.blocks.begin(), cs.blocks.end(), std::greater<>());
  }

  cs.mhat.assign(static_cast<std::size_t>(cs.zero_count), 0);
  if (cs.elliptic) {
    for (long long v : cs.blocks) {
      cs.mhat.push_back(v);
      cs.mhat.push_back(-v);
    }
  } else {
    for (long long v : cs.blocks) cs.mhat.push_back(v);
  }
  if (static_cast<int>(cs.mhat.size()) != cs.n)
    throw error(errc::internal, "canonical structure dimension mismatch");
  return cs;
}

RatMat integer_canonical_matrix(const CanonicalStructure& cs) {
  RatMat m(cs.n, cs.n);
  int pos = cs.zero_count;
  if (cs.elliptic) {
    for (long long v : cs.blocks) {
      m(pos, pos + 1) = Rat(-v);
      m(pos + 1, pos) = Rat(v);
      pos += 2;
    }
  } else {
    for (long long v : cs.blocks) {
      m(pos, pos) = Rat(v);
      ++pos;
    }
  }
  return m;
}

ScalarMat complexification_matrix(const CanonicalStructure& cs) {
  ScalarMat w(cs.n, cs.n);
  int pos = 0;
  for (; pos < cs.zero_count; ++pos) w(pos, pos) = Scalar(1);
  if (cs.elliptic) {
    for (std::size_t b = 0; b < cs.blocks.size(); ++b) {
      w(pos, pos) = Scalar(1);
      w(pos, pos + 1) = Scalar::i();
      w(pos + 1, pos) = Scalar(1);
      w(pos + 1, pos + 1) = -Scalar::i();
      pos += 2;
    }
  } else {
    for (; pos < cs.n; ++pos) w(pos, pos) = Scalar(1);
  }
  return w;
}

ScalarMat complexification_inverse(const CanonicalStructure& cs) {
  ScalarMat w(cs.n, cs.n);
  int pos = 0;
  for (; pos < cs.zero_count; ++pos) w(pos, pos) = Scalar(1);
  if (cs.elliptic) {
    Scalar half(Rat(1, 2));
    Scalar half_i = Scalar(Rat(0), Rat(1, 2));
    for (std::size_t b = 0; b < cs.blocks.size(); ++b) {
      w(pos, pos) = half;
      w(pos, pos + 1) = half;
      w(pos + 1, pos) = -half_i;
      w(pos + 1, pos + 1) = half_i;
      pos += 2;
    }
  } else {
    for (; pos < cs.n; ++pos) w(pos, pos) = Scalar(1);
  }
  return w;
}

Canonicalization canonicalize_linear_part(const RatMat& a, const SpectrumClass& cls) {
  int n = a.rows();
  if (a.cols() != n || static_cast<int>(cls.m.size()) != n)
    throw error(errc::dimension_mismatch, "canonicalize shape");

  CanonicalStructure cs = canonical_structure(cls);
  RatPoly chi = characteristic_polynomial(a);

  int zero_mult = 0;
  while (chi.coeff(zero_mult).is_zero()) ++zero_mult;
  if (zero_mult != cs.zero_count)
    throw error(errc::not_canonicalizable,
                "zero-eigenvalue multiplicity disagrees with the classification");
  std::vector<Rat> psi_coeffs(chi.coeffs().begin() + zero_mult, chi.coeffs().end());
  RatPoly psi{std::move(psi_coeffs)};
  int nz = psi.degree();

  // Recover lambda exactly from the first nonvanishing symmetric function.
  Rat lambda;
  if (cs.elliptic) {
    // psi = prod (t^2 + (m lambda)^2): coeff of t^{nz-2} is lambda^2 sum m^2.
    Rat sum_sq(0);
    for (long long v : cs.blocks) sum_sq += Rat(v) * Rat(v);
    Rat tau = psi.coeff(nz - 2) / sum_sq;
    auto root = rational_kth_root(tau, 2);
    if (!root || *root <= 0)
      throw error(errc::not_canonicalizable, "base eigenvalue lambda is not rational");
    lambda = *root;
  } else {
    auto e = elementary_symmetric_all(cs.blocks);
    int j = 1;
    while (j <= nz && e[static_cast<std::size_t>(j)].is_zero()) ++j;
    if (j > nz) throw error(errc::internal, "all symmetric functions vanish");
    // coeff of t^{nz-j} in prod (t - m lambda) is (-1)^j e_j(m) lambda^j.
    Rat pow_val = psi.coeff(nz - j) / e[static_cast<std::size_t>(j)];
    if (j % 2 == 1) pow_val = -pow_val;
    auto root = rational_kth_root(pow_val, j);
    if (!root || *root <= 0)
      throw error(errc::not_canonicalizable, "base eigenvalue lambda is not rational");
    lambda = *root;
  }

  // Exact verification that chi splits as classified.
  RatPoly expected = RatPoly::constant(Rat(1));
  if (cs.elliptic) {
    for (long long v : cs.blocks) {
      Rat av = Rat(v) * lambda;
      expected = expected * RatPoly({av * av, Rat(0), Rat(1)});
    }
  } else {
    for (long long v : cs.blocks) expected = expected * RatPoly({-Rat(v) * lambda, Rat(1)});
  }
  if (!(expected == psi))
    throw error(errc::not_canonicalizable, "characteristic polynomial does not split as classified");

  std::vector<std::vector<Rat>> columns;
  auto take_nullspace = [&](const RatMat& mat, int expected_dim, const char* what) {
    auto basis = mat.nullspace();
    if (static_cast<int>(basis.size()) != expected_dim)
      throw error(errc::not_canonicalizable,
                  std::string("eigenspace dimension mismatch: ") + what);
    return basis;
  };

  if (cs.zero_count > 0)
    for (auto& v : take_nullspace(a, cs.zero_count, "zero block")) columns.push_back(std::move(v));

  if (cs.elliptic) {
    std::map<long long, int> mult;
    for (long long v : cs.blocks) ++mult[v];
    long long prev = 0;
    for (long long v : cs.blocks) {
      if (v == prev) continue;  // one pass per distinct value, ascending
      prev = v;
      Rat aval = Rat(v) * lambda;
      RatMat shifted = a * a;
      for (int i = 0; i < n; ++i) shifted(i, i) += aval * aval;
      auto basis = take_nullspace(shifted, 2 * mult[v], "elliptic block");
      std::vector<std::vector<Rat>> chosen;
      for (int b = 0; b < mult[v]; ++b) {
        const std::vector<Rat>* u = nullptr;
        for (const auto& cand : basis) {
          if (independent_of(chosen, cand)) {
            u = &cand;
            break;
          }
        }
        if (!u) throw error(errc::not_canonicalizable, "cannot complete elliptic block basis");
        std::vector<Rat> w = a.apply(*u);
        Rat inv = Rat(1) / aval;
        for (auto& x : w) x *= inv;
        chosen.push_back(*u);
        chosen.push_back(std::move(w));
      }
      for (auto& c : chosen) columns.push_back(std::move(c));
    }
  } else {
    long long prev = 0;
    bool first = true;
    std::map<long long, int> mult;
    for (long long v : cs.blocks) ++mult[v];
    for (long long v : cs.blocks) {
      if (!first && v == prev) continue;
      first = false;
      prev = v;
      RatMat shifted = a;
      Rat mu = Rat(v) * lambda;
      for (int i = 0; i < n; ++i) shifted(i, i) -= mu;
      for (auto& vec : take_nullspace(shifted, mult[v], "hyperbolic eigenvalue"))
        columns.push_back(std::move(vec));
    }
  }

  if (static_cast<int>(columns.size()) != n)
    throw error(errc::internal, "eigenvector assembly incomplete");
  RatMat t(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) t(r, c) = columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];

  auto t_inv = t.inverse();
  if (!t_inv) throw error(errc::not_canonicalizable, "eigenvector matrix is singular");
  RatMat canonical = *t_inv * a * t;
  RatMat integer_form = integer_canonical_matrix(cs);
  if (!(canonical == lambda * integer_form))
    throw error(errc::not_canonicalizable, "conjugation does not reach the canonical form");

  Canonicalization out;
  out.basis = std::move(t);
  out.canonical = std::move(canonical);
  out.lambda = std::move(lambda);
  out.integer_form = std::move(integer_form);
  out.structure = std::move(cs);
  return out;
}

}  // namespace nfforge
