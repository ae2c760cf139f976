#include "nfforge/normalform.hpp"

#include <algorithm>

namespace nfforge {

long long homological_eigenvalue(const Exponent& alpha, int j, std::span<const long long> m) {
  long long acc = 0;
  for (int i = 0; i < alpha.nvars(); ++i)
    acc += static_cast<long long>(alpha[i]) * m[static_cast<std::size_t>(i)];
  return acc - m[static_cast<std::size_t>(j)];
}

namespace {

Scalar eigenvalue_scalar(long long e, bool elliptic) {
  return elliptic ? Scalar(Rat(0), Rat(e)) : Scalar(Rat(e));
}

// Diagonal linear field sum unit*mhat_j x_j d_j.
VectorFieldJet diagonal_linear_field(std::span<const long long> mhat, bool elliptic, int order) {
  int n = static_cast<int>(mhat.size());
  ScalarMat lin(n, n);
  for (int j = 0; j < n; ++j) lin(j, j) = eigenvalue_scalar(mhat[static_cast<std::size_t>(j)], elliptic);
  return VectorFieldJet::from_linear(lin, order);
}

}  // namespace

PdStep pd_step(const VectorFieldJet& current, int degree, std::span<const long long> mhat,
               bool elliptic) {
  int n = current.nvars();
  int order = current.order();
  if (static_cast<int>(mhat.size()) != n) throw error(errc::dimension_mismatch, "pd_step shape");

  std::vector<TruncatedSeries> change(static_cast<std::size_t>(n), TruncatedSeries(n, order));
  std::vector<TruncatedSeries> resonant(static_cast<std::size_t>(n), TruncatedSeries(n, order));
  for (int j = 0; j < n; ++j) {
    for (const auto& [alpha, c] : current.component(j).terms()) {
      if (alpha.degree() != degree) continue;
      long long e = homological_eigenvalue(alpha, j, mhat);
      if (e == 0) {
        resonant[static_cast<std::size_t>(j)].set_coeff(alpha, c);
      } else {
        // Killing the term costs -c/e; division by a nonzero integer, exact.
        change[static_cast<std::size_t>(j)].set_coeff(alpha, -(c / eigenvalue_scalar(e, elliptic)));
      }
    }
  }
  return {VectorFieldJet(std::move(change)), VectorFieldJet(std::move(resonant))};
}

FactorExtract factor_extract(const VectorFieldJet& resonant_part, int degree,
                             std::span<const long long> mhat, bool elliptic) {
  int n = resonant_part.nvars();
  int order = resonant_part.order();
  if (static_cast<int>(mhat.size()) != n)
    throw error(errc::dimension_mismatch, "factor_extract shape");

  // Resonant monomials beta of degree-(d-1): <beta, mhat> = 0. For each, the
  // coefficient system G_beta * unit*mhat_j = R_{beta+e_j, j} over all j is
  // determined by the first axis with mhat_j != 0 and verified on the rest;
  // whatever fails verification stays in the leftover.
  TruncatedSeries f_inc(n, order);
  int jstar = 0;
  while (jstar < n && mhat[static_cast<std::size_t>(jstar)] == 0) ++jstar;
  if (jstar == n) throw error(errc::internal, "factor_extract: zero eigenvector");

  for_each_exponent_of_degree(n, degree - 1, [&](const Exponent& beta) {
    long long r = 0;
    for (int i = 0; i < n; ++i) r += static_cast<long long>(beta[i]) * mhat[static_cast<std::size_t>(i)];
    if (r != 0) return;
    Scalar rhs = resonant_part.component(jstar).coeff(beta + Exponent::unit(n, jstar));
    if (rhs.is_zero()) return;
    Scalar g = rhs / eigenvalue_scalar(mhat[static_cast<std::size_t>(jstar)], elliptic);
    f_inc.set_coeff(beta, g);
  });

  // leftover = R - f_inc * X1 restricted to this degree.
  VectorFieldJet removable = f_inc * diagonal_linear_field(mhat, elliptic, order);
  VectorFieldJet leftover = resonant_part - removable.homogeneous_part(degree);
  return {std::move(f_inc), std::move(leftover)};
}

GeometricNormalForm geometric_normalize(const VectorFieldJet& x, const CanonicalStructure& cs) {
  int n = x.nvars();
  int order = x.order();
  if (n != cs.n) throw error(errc::dimension_mismatch, "geometric_normalize shape");

  RatMat integer_form = integer_canonical_matrix(cs);
  if (!(x.linear_part() == to_scalar_matrix(integer_form)))
    throw error(errc::hypothesis_violation,
                "geometric_normalize expects the integer canonical linear part");

  ScalarMat w = complexification_matrix(cs);
  ScalarMat w_inv = complexification_inverse(cs);
  PolyMap w_map = PolyMap::linear(w, order);
  PolyMap w_inv_map = PolyMap::linear(w_inv, order);

  VectorFieldJet cur = cs.elliptic ? pushforward(x, w_map) : x;
  VectorFieldJet x1c = diagonal_linear_field(cs.mhat, cs.elliptic, order);
  if (!(cur.linear_part() == x1c.linear_part()))
    throw error(errc::internal, "complexified linear part is not diagonal");

  TruncatedSeries factor = TruncatedSeries::constant(n, order, Scalar(1));
  PolyMap phi = PolyMap::identity(n, order);
  std::optional<ObstructionReport> obstruction;

  for (int d = 2; d <= order; ++d) {
    VectorFieldJet defect = cur - factor * x1c;
    auto val = [&]() {
      int v = order + 1;
      for (int i = 0; i < n; ++i) {
        auto vi = defect.component(i).valuation();
        if (vi) v = std::min(v, *vi);
      }
      return v;
    }();
    if (val < d) throw error(errc::internal, "defect appeared below the current degree");
    if (val > order) break;

    PdStep step = pd_step(defect, d, cs.mhat, cs.elliptic);
    if (!step.change.is_zero()) {
      std::vector<TruncatedSeries> comps;
      comps.reserve(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        comps.push_back(TruncatedSeries::variable(n, order, i) + step.change.component(i));
      PolyMap phi_d{std::move(comps)};
      cur = pushforward(cur, phi_d);
      phi = phi_d.compose(phi);
    }

    VectorFieldJet res = (cur - factor * x1c).homogeneous_part(d);
    for (int j = 0; j < n; ++j)
      for (const auto& [alpha, c] : res.component(j).terms())
        if (homological_eigenvalue(alpha, j, cs.mhat) != 0)
          throw error(errc::internal, "nonresonant terms survived the degree step");

    FactorExtract fx = factor_extract(res, d, cs.mhat, cs.elliptic);
    if (!fx.leftover.is_zero()) {
      VectorFieldJet leftover_real =
          cs.elliptic ? pushforward(fx.leftover, w_inv_map) : fx.leftover;
      obstruction = ObstructionReport{
          d, std::move(leftover_real),
          "resonant terms at degree " + std::to_string(d) +
              " do not assemble as (invariant) * X1; hypotheses fail at this order"};
      break;
    }
    factor += fx.f_increment;
  }

  GeometricNormalForm nf;
  nf.residual_order = order;
  nf.linear_canonical = to_scalar_matrix(integer_form);
  if (cs.elliptic) {
    nf.phi = w_inv_map.compose(phi).compose(w_map);
    nf.factor = factor.compose(w_map.components());
    for (const auto& c : nf.phi.components())
      if (!c.has_real_coefficients())
        throw error(errc::internal, "realified change has complex coefficients");
    if (!nf.factor.has_real_coefficients())
      throw error(errc::internal, "realified factor has complex coefficients");
  } else {
    nf.phi = std::move(phi);
    nf.factor = std::move(factor);
  }
  nf.obstruction = std::move(obstruction);

  // The loop has already closed every degree exactly; verify_normal_form
  // recomputes the residual independently for callers that need the check.
  if (!nf.obstruction && nf.factor.coeff(Exponent(n)) != Scalar(1))
    throw error(errc::internal, "normal form factor is not 1 at the origin");
  return nf;
}

NormalFormVerification verify_normal_form(const VectorFieldJet& x, const GeometricNormalForm& nf) {
  NormalFormVerification out;
  int n = x.nvars();
  int order = x.order();
  VectorFieldJet x1 = VectorFieldJet::from_linear(nf.linear_canonical, order);
  out.residual = pushforward(x, nf.phi) - nf.factor * x1;
  out.residual_zero = out.residual.is_zero();
  out.factor_unit_at_origin = nf.factor.coeff(Exponent(n)) == Scalar(1);
  out.factor_invariant = lie_derivative(x1, nf.factor).is_zero();
  return out;
}

TransportResult first_integral_transport(const IntegrableSystem& sys,
                                         const GeometricNormalForm& nf,
                                         const InvariantGenerators* gens) {
  TransportResult out;
  int order = sys.x.order();
  VectorFieldJet x1 = VectorFieldJet::from_linear(nf.linear_canonical, order);
  VectorFieldJet normalized = nf.factor * x1;
  PolyMap phi_inv = nf.phi.inverse();

  for (std::size_t i = 0; i < sys.first_integrals.size(); ++i) {
    const TruncatedSeries& f = sys.first_integrals[i];
    TruncatedSeries moved = f.compose(phi_inv.components());
    bool source_conserved = lie_derivative(sys.x, f).is_zero();
    bool annihilated = lie_derivative(normalized, moved).is_zero();
    if (source_conserved && !annihilated)
      throw error(errc::transport_failed,
                  "transported integral lost annihilation; internal inconsistency");
    out.annihilated.push_back(annihilated);

    std::optional<TruncatedSeries> expressed;
    if (gens && annihilated) {
      // Strip the constant: representations are sought for the vanishing part.
      TruncatedSeries g = moved;
      Scalar c0 = g.coeff(Exponent(g.nvars()));
      g.set_coeff(Exponent(g.nvars()), Scalar());
      try {
        TruncatedSeries rep = express_in_invariants(g, *gens);
        rep.add_term(Exponent(rep.nvars()), c0);
        expressed = std::move(rep);
      } catch (const error&) {
        expressed = std::nullopt;  // reported as unrepresented
      }
    }
    out.in_invariants.push_back(std::move(expressed));
    out.transported.push_back(std::move(moved));
  }
  return out;
}

}  // namespace nfforge
