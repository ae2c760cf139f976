#include "nfforge/integrability.hpp"

#include <algorithm>
#include <map>

namespace nfforge {

IntegrabilityCheck check_integrability(const VectorFieldJet& x,
                                       std::span<const TruncatedSeries> fs) {
  IntegrabilityCheck out;
  out.per_integral.reserve(fs.size());
  for (const auto& f : fs) {
    TruncatedSeries lf = lie_derivative(x, f);
    auto val = lf.valuation();
    out.per_integral.push_back(val);
    if (val) {
      out.ok = false;
      if (!out.first_violation_degree || *val < *out.first_violation_degree)
        out.first_violation_degree = val;
    }
  }
  return out;
}

namespace {

TruncatedSeries strip_constant(const TruncatedSeries& f) {
  TruncatedSeries g = f;
  g.set_coeff(Exponent(f.nvars()), Scalar());
  return g;
}

// Monomials over `m` variables whose weighted degree (weights w) equals
// target; grlex-sorted.
std::vector<Exponent> weighted_monomials(const std::vector<int>& w, int target) {
  int m = static_cast<int>(w.size());
  std::vector<Exponent> out;
  Exponent cur(m);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == m) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    for (int t = 0; t * w[static_cast<std::size_t>(pos)] <= remaining; ++t) {
      cur[pos] = t;
      self(self, pos + 1, remaining - t * w[static_cast<std::size_t>(pos)]);
      cur[pos] = 0;
    }
  };
  rec(rec, 0, target);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<TruncatedSeries> adapt_integrals(std::vector<TruncatedSeries> fs, int order,
                                             int degree_bound) {
  if (fs.empty()) return fs;
  if (degree_bound < 0) degree_bound = 2 * order;
  int m = static_cast<int>(fs.size());
  int n = fs[0].nvars();

  for (auto& f : fs) f = strip_constant(f);

  int max_rounds = m * order + 1;
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<TruncatedSeries> lowest;
    std::vector<int> weights;
    for (const auto& f : fs) {
      auto val = f.valuation();
      if (!val)
        throw error(errc::not_independent,
                    "an adapted integral vanished identically at this jet order");
      lowest.push_back(f.homogeneous_part(*val));
      weights.push_back(*val);
    }

    if (jacobian_rank_series(lowest).rank == m) return fs;

    // Search the smallest weighted degree carrying a relation among the
    // lowest parts. Products are evaluated at the extended order so nothing
    // truncates away.
    std::optional<TruncatedSeries> relation;  // polynomial over m variables
    std::vector<TruncatedSeries> lowest_ext;
    for (const auto& h : lowest) lowest_ext.push_back(h.with_order(degree_bound));
    for (int w = 2; w <= degree_bound && !relation; ++w) {
      auto gammas = weighted_monomials(weights, w);
      if (gammas.size() < 2) continue;
      std::vector<Exponent> rows;
      for_each_exponent_of_degree(n, w, [&](const Exponent& alpha) { rows.push_back(alpha); });
      std::map<Exponent, int> row_index;
      for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = static_cast<int>(i);

      ScalarMat mat(static_cast<int>(rows.size()), static_cast<int>(gammas.size()));
      for (std::size_t c = 0; c < gammas.size(); ++c) {
        TruncatedSeries prod = TruncatedSeries::constant(n, degree_bound, Scalar(1));
        for (int g = 0; g < m; ++g)
          for (int t = 0; t < gammas[c][g]; ++t) prod = prod * lowest_ext[static_cast<std::size_t>(g)];
        for (const auto& [alpha, coeff] : prod.terms())
          mat(row_index.at(alpha), static_cast<int>(c)) = coeff;
      }
      auto null = mat.nullspace();
      if (null.empty()) continue;
      TruncatedSeries rel(m, degree_bound);
      for (std::size_t c = 0; c < gammas.size(); ++c)
        if (!null.front()[c].is_zero()) rel.set_coeff(gammas[c], null.front()[c]);
      relation = std::move(rel);
    }
    if (!relation)
      throw error(errc::not_independent,
                  "lowest-degree parts are dependent but no polynomial relation was found "
                  "within weighted degree " +
                      std::to_string(degree_bound));

    // Pick the replacement slot: the largest index s whose partial derivative
    // of the relation, evaluated on the integrals, is a nonzero jet.
    int chosen = -1;
    for (int s = m - 1; s >= 0 && chosen < 0; --s) {
      TruncatedSeries dr = relation->derivative(s);
      if (dr.is_zero()) continue;
      TruncatedSeries probe = dr.compose(fs);
      if (!probe.is_zero()) chosen = s;
    }
    if (chosen < 0)
      throw error(errc::not_independent, "relation cannot replace any integral");

    // Normalize: unit coefficient on the monomial with the highest power of
    // the replaced variable (grlex-first among ties).
    const Exponent* pivot = nullptr;
    for (const auto& [gamma, c] : relation->terms())
      if (!pivot || gamma[chosen] > (*pivot)[chosen]) pivot = &gamma;
    Scalar scale = Scalar(1) / relation->coeff(*pivot);
    TruncatedSeries normalized = scale * *relation;

    TruncatedSeries replacement = strip_constant(normalized.compose(fs));
    if (replacement.is_zero())
      throw error(errc::not_independent,
                  "integrals are polynomially dependent at this jet order");
    fs[static_cast<std::size_t>(chosen)] = std::move(replacement);
  }
  throw error(errc::not_independent, "adaptation did not terminate");
}

NondegeneracyReport check_nondegeneracy(const IntegrableSystem& sys) {
  NondegeneracyReport rep;
  int n = sys.x.nvars();
  int k = 0;

  rep.integrability = check_integrability(sys.x, sys.first_integrals);
  rep.integrals_conserved = rep.integrability.ok;
  rep.independence = jacobian_rank_series(sys.first_integrals);
  bool independent = rep.independence.rank == static_cast<int>(sys.first_integrals.size()) &&
                     !sys.first_integrals.empty();
  rep.cond_i = rep.integrals_conserved && independent;

  RatMat a = to_rat_matrix(sys.x.linear_part());
  rep.linear_semisimple = semisimplicity_check(a);
  RatPoly chi = characteristic_polynomial(a);
  rep.semisimple_part_nonzero = false;
  for (int j = 0; j < n; ++j)
    if (!chi.coeff(j).is_zero()) rep.semisimple_part_nonzero = true;

  if (sys.cls) {
    rep.cls = sys.cls;
  } else {
    try {
      rep.cls = classify_spectrum(eigenvalues_numeric(a));
    } catch (const error& e) {
      rep.classification_error = std::string(errc_name(e.kind())) + ": " + e.what();
    }
  }
  if (rep.cls) k = rep.cls->zero_count;

  rep.cond_ii = rep.semisimple_part_nonzero && independent;

  rep.integral_order.resize(sys.first_integrals.size());
  for (std::size_t i = 0; i < rep.integral_order.size(); ++i)
    rep.integral_order[i] = static_cast<int>(i);

  if (k >= 1) {
    int count = static_cast<int>(sys.first_integrals.size());
    RatMat diffs(count, n);
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < n; ++j) {
        Scalar c = sys.first_integrals[static_cast<std::size_t>(i)].coeff(Exponent::unit(n, j));
        if (!c.im.is_zero()) throw error(errc::internal, "complex first integral");
        diffs(i, j) = c.re;
      }

    // Lexicographically-first k-subset with independent differentials at O.
    std::vector<int> subset;
    bool found = false;
    auto rec = [&](auto&& self, int start) -> void {
      if (found) return;
      if (static_cast<int>(subset.size()) == k) {
        RatMat sub(k, n);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < n; ++j) sub(i, j) = diffs(subset[static_cast<std::size_t>(i)], j);
        if (sub.rank() == k) found = true;
        return;
      }
      for (int i = start; i < count && !found; ++i) {
        subset.push_back(i);
        self(self, i + 1);
        if (!found) subset.pop_back();
      }
    };
    if (k <= count) rec(rec, 0);

    if (found) {
      rep.cond_iii = true;
      rep.zero_block_rank = k;
      std::vector<int> order;
      order.insert(order.end(), subset.begin(), subset.end());
      for (int i = 0; i < count; ++i)
        if (std::find(subset.begin(), subset.end(), i) == subset.end()) order.push_back(i);
      rep.integral_order = std::move(order);
    } else {
      rep.cond_iii = false;
      RatMat first_k(std::min(k, count), n);
      for (int i = 0; i < first_k.rows(); ++i)
        for (int j = 0; j < n; ++j) first_k(i, j) = diffs(i, j);
      rep.zero_block_rank = first_k.rows() > 0 ? first_k.rank() : 0;
    }
  }
  return rep;
}

std::vector<double> ParametrizedFamily::center_at(std::span<const double> c) const {
  std::vector<double> out;
  out.reserve(center.size());
  for (const auto& s : center) out.push_back(s.evaluate_real(c));
  return out;
}

std::vector<double> ParametrizedFamily::evaluate(std::span<const double> c,
                                                 std::span<const double> y) const {
  int k = parameter_count;
  int r = reduced_dimension;
  if (static_cast<int>(c.size()) != k || static_cast<int>(y.size()) != r)
    throw error(errc::dimension_mismatch, "family evaluation shape");
  std::vector<double> oc = center_at(c);
  std::vector<double> point(static_cast<std::size_t>(k + r));
  for (int i = 0; i < k; ++i) point[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
  for (int i = 0; i < r; ++i)
    point[static_cast<std::size_t>(k + i)] = oc[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)];
  std::vector<double> out(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    out[static_cast<std::size_t>(i)] =
        full_components[static_cast<std::size_t>(k + i)].evaluate_real(point);
  return out;
}

ParametrizedFamily reduce_zero_block(const IntegrableSystem& sys, const SpectrumClass& cls) {
  int n = sys.x.nvars();
  int k = cls.zero_count;
  int order = sys.x.order();
  if (k < 1 || k >= n)
    throw error(errc::straightening_failed, "reduction needs 1 <= k < n zero eigenvalues");

  // Canonical coordinates: zero block leading, decoupled exactly.
  const ScalarMat& a = sys.x.linear_part();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((i < k || j < k) && !a(i, j).is_zero())
        throw error(errc::straightening_failed,
                    "reduce_zero_block expects canonical coordinates with a leading zero block");

  if (static_cast<int>(sys.first_integrals.size()) < k)
    throw error(errc::straightening_failed, "fewer integrals than zero eigenvalues");

  // Straighten F_1..F_k into the first k coordinates.
  std::vector<TruncatedSeries> theta;
  theta.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) theta.push_back(strip_constant(sys.first_integrals[static_cast<std::size_t>(i)]));
  for (int i = k; i < n; ++i) theta.push_back(TruncatedSeries::variable(n, order, i));
  PolyMap straighten{std::move(theta)};
  if (!straighten.linear_matrix().inverse())
    throw error(errc::straightening_failed,
                "differentials of the leading integrals do not straighten (condition iii)");

  VectorFieldJet moved = pushforward(sys.x, straighten);
  for (int i = 0; i < k; ++i)
    if (!moved.component(i).is_zero())
      throw error(errc::straightening_failed,
                  "field does not preserve the straightened integrals exactly");

  // Restriction to c = 0.
  int r = n - k;
  std::vector<TruncatedSeries> slice_args;
  for (int i = 0; i < k; ++i) slice_args.push_back(TruncatedSeries(r, order));
  for (int i = 0; i < r; ++i) slice_args.push_back(TruncatedSeries::variable(r, order, i));
  std::vector<TruncatedSeries> reduced;
  for (int i = k; i < n; ++i) reduced.push_back(moved.component(i).compose(slice_args));
  VectorFieldJet reduced_at_zero{std::move(reduced)};

  // Jet solve of X(O_c) = 0: w(c) with G(c, w(c)) = 0, G the trailing
  // components. The invertible trailing linear block drives a fixed-point
  // iteration that gains one degree in c per pass.
  ScalarMat cprime(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) cprime(i, j) = a(k + i, k + j);
  auto cprime_inv = cprime.inverse();
  if (!cprime_inv) throw error(errc::internal, "trailing block is singular");

  std::vector<TruncatedSeries> w(static_cast<std::size_t>(r), TruncatedSeries(k, order));
  for (int pass = 0; pass <= order; ++pass) {
    // args over k parameter variables: c_i, then w_j.
    std::vector<TruncatedSeries> args;
    for (int i = 0; i < k; ++i) args.push_back(TruncatedSeries::variable(k, order, i));
    for (int i = 0; i < r; ++i) args.push_back(w[static_cast<std::size_t>(i)]);
    std::vector<TruncatedSeries> g(static_cast<std::size_t>(r), TruncatedSeries(k, order));
    for (int i = 0; i < r; ++i) g[static_cast<std::size_t>(i)] = moved.component(k + i).compose(args);
    // w <- w - C'^{-1} g
    std::vector<TruncatedSeries> next = w;
    bool changed = false;
    for (int i = 0; i < r; ++i) {
      TruncatedSeries delta(k, order);
      for (int j = 0; j < r; ++j) delta += (*cprime_inv)(i, j) * g[static_cast<std::size_t>(j)];
      next[static_cast<std::size_t>(i)] -= delta;
      if (!(next[static_cast<std::size_t>(i)] == w[static_cast<std::size_t>(i)])) changed = true;
    }
    w = std::move(next);
    if (!changed) break;
  }

  // Verify the jet solve by substitution.
  {
    std::vector<TruncatedSeries> args;
    for (int i = 0; i < k; ++i) args.push_back(TruncatedSeries::variable(k, order, i));
    for (int i = 0; i < r; ++i) args.push_back(w[static_cast<std::size_t>(i)]);
    for (int i = 0; i < r; ++i)
      if (!moved.component(k + i).compose(args).is_zero())
        throw error(errc::internal, "singular-point recentering did not close");
  }

  ParametrizedFamily fam;
  fam.parameter_count = k;
  fam.reduced_dimension = r;
  fam.straighten = std::move(straighten);
  fam.reduced_at_zero = std::move(reduced_at_zero);
  fam.center = std::move(w);
  fam.full_components = moved.components();
  return fam;
}

LocusCurve singular_locus_2d(const VectorFieldJet& x) {
  if (x.nvars() != 2) throw error(errc::dimension_mismatch, "singular_locus_2d needs n = 2");
  const ScalarMat& a = x.linear_part();
  if (!a(0, 1).is_zero() || !a(1, 0).is_zero())
    throw error(errc::hypothesis_violation, "singular_locus_2d expects a diagonal linear part");

  int h;  // hyperbolic axis
  if (!a(0, 0).is_zero() && a(1, 1).is_zero())
    h = 0;
  else if (a(0, 0).is_zero() && !a(1, 1).is_zero())
    h = 1;
  else if (a(0, 0).is_zero() && a(1, 1).is_zero())
    throw error(errc::implicit_solve_failed,
                "the x-derivative of the first component vanishes at the origin");
  else
    throw error(errc::hypothesis_violation, "singular_locus_2d expects exactly one zero eigenvalue");

  int order = x.order();
  Scalar slope = a(h, h);
  const TruncatedSeries& comp = x.component(h);

  TruncatedSeries s(1, order);  // x_h as a series in the other coordinate
  Scalar inv = Scalar(1) / slope;
  for (int pass = 0; pass <= order; ++pass) {
    std::vector<TruncatedSeries> args(2, TruncatedSeries(1, order));
    args[static_cast<std::size_t>(h)] = s;
    args[static_cast<std::size_t>(1 - h)] = TruncatedSeries::variable(1, order, 0);
    TruncatedSeries value = comp.compose(args);
    if (value.is_zero()) break;
    s -= inv * value;
  }
  {
    std::vector<TruncatedSeries> args(2, TruncatedSeries(1, order));
    args[static_cast<std::size_t>(h)] = s;
    args[static_cast<std::size_t>(1 - h)] = TruncatedSeries::variable(1, order, 0);
    if (!comp.compose(args).is_zero())
      throw error(errc::implicit_solve_failed, "implicit jet solve did not close");
  }

  LocusCurve out;
  out.hyperbolic_axis = h;
  out.curve = s;
  std::vector<TruncatedSeries> args(2, TruncatedSeries(1, order));
  args[static_cast<std::size_t>(h)] = out.curve;
  args[static_cast<std::size_t>(1 - h)] = TruncatedSeries::variable(1, order, 0);
  out.other_component_on_curve = x.component(1 - h).compose(args);
  out.field_vanishes_on_curve = out.other_component_on_curve.is_zero();
  return out;
}

}  // namespace nfforge
