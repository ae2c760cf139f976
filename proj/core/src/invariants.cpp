#include "nfforge/invariants.hpp"

#include <algorithm>
#include <set>

#include "nfforge/vector_field.hpp"

namespace nfforge {

namespace {

long long residue(const Exponent& a, const std::vector<long long>& m) {
  long long r = 0;
  for (int i = 0; i < a.nvars(); ++i) r += static_cast<long long>(a[i]) * m[static_cast<std::size_t>(i)];
  return r;
}

bool dominated_by_any(const std::vector<Exponent>& basis, const Exponent& v) {
  for (const auto& g : basis)
    if (g.divides(v)) return true;
  return false;
}

}  // namespace

HilbertBasis hilbert_basis(const ResonanceProblem& problem, int degree_cap) {
  const auto& m = problem.m;
  int n = static_cast<int>(m.size());
  if (n == 0 || std::all_of(m.begin(), m.end(), [](long long v) { return v == 0; }))
    throw error(errc::internal, "resonance problem needs a nonzero vector");
  if (degree_cap < 1) throw error(errc::degree_cap_exceeded, "degree cap must be at least 1");

  std::vector<Exponent> basis;
  std::set<Exponent> frontier;
  for (int i = 0; i < n; ++i) {
    Exponent e = Exponent::unit(n, i);
    if (residue(e, m) == 0)
      basis.push_back(e);
    else
      frontier.insert(std::move(e));
  }

  int degree = 1;
  while (!frontier.empty()) {
    if (degree >= degree_cap)
      throw error(errc::degree_cap_exceeded,
                  "hilbert_basis did not saturate within the degree cap");
    std::set<Exponent> next;
    for (const auto& t : frontier) {
      long long r = residue(t, m);
      for (int j = 0; j < n; ++j) {
        if (r * m[static_cast<std::size_t>(j)] >= 0) continue;  // must move toward zero
        Exponent u = t + Exponent::unit(n, j);
        if (dominated_by_any(basis, u)) continue;
        next.insert(std::move(u));
      }
    }
    std::set<Exponent> carry;
    for (auto& u : next) {
      if (residue(u, m) == 0)
        basis.push_back(u);
      else
        carry.insert(u);
    }
    // Solutions found at this degree may dominate frontier candidates.
    frontier.clear();
    for (auto& u : carry)
      if (!dominated_by_any(basis, u)) frontier.insert(u);
    ++degree;
  }

  std::sort(basis.begin(), basis.end());
  return HilbertBasis{std::move(basis)};
}

namespace {

// Real polynomial for a complex-coordinate monomial z^a over the canonical
// coordinates. Returns the pair (Re, Im) as series; Im is identically zero
// for diagonal monomials.
std::pair<TruncatedSeries, TruncatedSeries> realify_monomial(const CanonicalStructure& cs,
                                                             const Exponent& a, int order) {
  int n = cs.n;
  TruncatedSeries re = TruncatedSeries::constant(n, order, Scalar(1));
  TruncatedSeries im(n, order);
  bool have_im = false;

  auto mul_complex = [&](const TruncatedSeries& fre, const TruncatedSeries& fim, bool fim_zero) {
    if (fim_zero && !have_im) {
      re = re * fre;
      return;
    }
    TruncatedSeries new_re = re * fre;
    TruncatedSeries new_im = im * fre;
    if (!fim_zero) {
      new_re -= im * fim;
      new_im += re * fim;
    }
    re = std::move(new_re);
    im = std::move(new_im);
    have_im = true;
  };

  // Zero-block coordinates: plain real powers.
  for (int i = 0; i < cs.zero_count; ++i) {
    if (a[i] == 0) continue;
    TruncatedSeries p = TruncatedSeries::variable(n, order, i).pow(a[i]);
    mul_complex(p, TruncatedSeries(n, order), true);
  }

  if (!cs.elliptic) {
    for (int i = cs.zero_count; i < n; ++i) {
      if (a[i] == 0) continue;
      TruncatedSeries p = TruncatedSeries::variable(n, order, i).pow(a[i]);
      mul_complex(p, TruncatedSeries(n, order), true);
    }
    return {std::move(re), std::move(im)};
  }

  // Elliptic pairs: complex coordinates (z, zbar) at real slots (p, p+1).
  int pos = cs.zero_count;
  for (std::size_t b = 0; b < cs.blocks.size(); ++b, pos += 2) {
    int ez = a[cs.zero_count + 2 * static_cast<int>(b)];
    int ezbar = a[cs.zero_count + 2 * static_cast<int>(b) + 1];
    if (ez == 0 && ezbar == 0) continue;
    int common = std::min(ez, ezbar);
    TruncatedSeries x = TruncatedSeries::variable(n, order, pos);
    TruncatedSeries y = TruncatedSeries::variable(n, order, pos + 1);
    if (common > 0) {
      TruncatedSeries radius = (x * x + y * y).pow(common);
      mul_complex(radius, TruncatedSeries(n, order), true);
    }
    int rest = ez - ezbar;  // (x + iy)^rest or (x - iy)^{-rest}
    if (rest != 0) {
      int k = std::abs(rest);
      // (x + s*iy)^k with s = sign(rest): expand binomially.
      TruncatedSeries pre(n, order), pim(n, order);
      Rat binom(1);
      for (int t = 0; t <= k; ++t) {
        // term C(k,t) x^{k-t} (s i y)^t
        TruncatedSeries part = x.pow(k - t) * y.pow(t);
        Rat c = binom;
        if (rest < 0 && t % 2 == 1) c = -c;
        switch (t % 4) {
          case 0: pre += Scalar(c) * part; break;
          case 1: pim += Scalar(c) * part; break;
          case 2: pre += Scalar(-c) * part; break;
          case 3: pim += Scalar(-c) * part; break;
        }
        binom = binom * Rat(k - t) / Rat(t + 1);
      }
      mul_complex(pre, pim, pim.is_zero());
    }
  }
  return {std::move(re), std::move(im)};
}

}  // namespace

InvariantGenerators invariant_generators(const CanonicalStructure& cs, const HilbertBasis& hb,
                                         int order) {
  InvariantGenerators out;
  out.structure = cs;
  out.order = order;

  std::set<Exponent> emitted;
  for (const auto& a : hb.generators) {
    if (a.degree() > order) continue;
    if (emitted.count(a)) continue;
    emitted.insert(a);

    // Conjugate exponent: swap within each elliptic pair.
    Exponent abar = a;
    if (cs.elliptic) {
      for (std::size_t b = 0; b < cs.blocks.size(); ++b) {
        int p = cs.zero_count + 2 * static_cast<int>(b);
        std::swap(abar[p], abar[p + 1]);
      }
    }
    bool diagonal = (abar == a);
    if (!diagonal) emitted.insert(abar);

    out.monomials.push_back(a);
    auto [re, im] = realify_monomial(cs, a, order);
    out.real_forms.push_back(std::move(re));
    out.degrees.push_back(a.degree());
    if (!diagonal && !im.is_zero()) {
      out.monomials.push_back(abar);
      out.real_forms.push_back(std::move(im));
      out.degrees.push_back(a.degree());
    }
  }
  return out;
}

TruncatedSeries express_in_invariants(const TruncatedSeries& f, const InvariantGenerators& gens) {
  const CanonicalStructure& cs = gens.structure;
  int n = cs.n;
  int order = f.order();
  if (f.nvars() != n) throw error(errc::dimension_mismatch, "express_in_invariants shape");

  VectorFieldJet x1 = VectorFieldJet::from_linear(
      to_scalar_matrix(integer_canonical_matrix(cs)), order);
  if (!lie_derivative(x1, f).is_zero())
    throw error(errc::not_invariant, "series is not a first integral of the linear field");

  int q = static_cast<int>(gens.real_forms.size());
  TruncatedSeries result(q, order);

  // Weighted monomials in the generators, grouped by the homogeneous degree
  // they produce; each degree slice is an independent exact solve.
  std::vector<Exponent> betas;
  {
    Exponent beta(q);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
      if (pos == q) {
        betas.push_back(beta);
        return;
      }
      int w = gens.degrees[static_cast<std::size_t>(pos)];
      for (int t = 0; t * w <= remaining; ++t) {
        beta[pos] = t;
        self(self, pos + 1, remaining - t * w);
        beta[pos] = 0;
      }
    };
    if (q == 0)
      betas.push_back(Exponent(0));
    else
      rec(rec, 0, order);
  }
  std::sort(betas.begin(), betas.end());

  auto weighted_degree = [&](const Exponent& beta) {
    int d = 0;
    for (int i = 0; i < q; ++i) d += beta[i] * gens.degrees[static_cast<std::size_t>(i)];
    return d;
  };

  for (int d = 0; d <= order; ++d) {
    TruncatedSeries slice = f.homogeneous_part(d);
    std::vector<Exponent> cols;
    for (const auto& beta : betas)
      if (weighted_degree(beta) == d) cols.push_back(beta);
    if (cols.empty()) {
      if (!slice.is_zero())
        throw error(errc::no_representation,
                    "no generator products at degree " + std::to_string(d));
      continue;
    }

    // Row space: monomials of degree d over the real coordinates.
    std::vector<Exponent> rows;
    for_each_exponent_of_degree(n, d, [&](const Exponent& alpha) { rows.push_back(alpha); });
    std::map<Exponent, int> row_index;
    for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = static_cast<int>(i);

    ScalarMat mat(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      TruncatedSeries prod = TruncatedSeries::constant(n, order, Scalar(1));
      for (int g = 0; g < q; ++g)
        for (int t = 0; t < cols[c][g]; ++t) prod = prod * gens.real_forms[static_cast<std::size_t>(g)];
      for (const auto& [alpha, coeff] : prod.terms())
        mat(row_index.at(alpha), static_cast<int>(c)) = coeff;
    }
    std::vector<Scalar> rhs(rows.size());
    for (const auto& [alpha, coeff] : slice.terms()) rhs[static_cast<std::size_t>(row_index.at(alpha))] = coeff;

    auto sol = mat.solve(rhs);
    if (!sol)
      throw error(errc::no_representation,
                  "degree " + std::to_string(d) + " slice is outside the generator algebra");
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (!(*sol)[c].is_zero()) result.set_coeff(cols[c], (*sol)[c]);
  }
  return result;
}

}  // namespace nfforge
