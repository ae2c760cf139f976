#include "nfforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nfforge/numverify.hpp"

namespace nfforge {

using nlohmann::ordered_json;

namespace {

ordered_json rat_matrix_json(const RatMat& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json class_json(const SpectrumClass& cls) {
  ordered_json j;
  j["case"] = to_string(cls.kind);
  j["k"] = cls.zero_count;
  j["m"] = cls.m;
  j["lambda"] = cls.lambda;
  return j;
}

ordered_json spectrum_json(const Spectrum& sp) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : sp.eigenvalues) {
    ordered_json e;
    e["re"] = v.real();
    e["im"] = v.imag();
    arr.push_back(std::move(e));
  }
  return arr;
}

std::string csv_of_curve(const ResidualCurve& curve, const char* value_name) {
  std::string out = std::string("radius,") + value_name + "\n";
  char buf[80];
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", curve.radii[i], curve.values[i]);
    out += buf;
  }
  return out;
}

ordered_json curve_json(const ResidualCurve& curve) {
  ordered_json j;
  j["radii"] = curve.radii;
  j["values"] = curve.values;
  if (std::isfinite(curve.slope))
    j["slope"] = curve.slope;
  else
    j["slope"] = "below_noise_floor";
  j["fitted_points"] = curve.fitted_points;
  j["noise_floor"] = curve.noise_floor;
  j["pass"] = curve.pass;
  return j;
}

// Everything the exact stages produce, reused across commands.
struct Stages {
  IntegrableSystem sys;  // original coordinates
  NondegeneracyReport ndg;
  std::optional<Spectrum> spectrum;
  std::optional<Canonicalization> canon;

  // Canonical, time-rescaled data.
  std::optional<VectorFieldJet> x_full;            // (1/lambda) T^{-1}_* X
  std::vector<TruncatedSeries> integrals_canon;    // reordered, in canonical coords
  std::optional<ParametrizedFamily> family;        // weak cases
  std::optional<VectorFieldJet> x_work;            // normalization input
  std::optional<CanonicalStructure> cs_work;
  std::vector<TruncatedSeries> integrals_work;

  std::optional<HilbertBasis> hilbert;
  std::optional<InvariantGenerators> gens;
  std::optional<GeometricNormalForm> nf;
  std::optional<NormalFormVerification> nfv;
  std::optional<LocusCurve> locus_jet;

  bool hypotheses_ok() const {
    return ndg.cls.has_value() && ndg.linear_semisimple && ndg.cond_i && ndg.cond_ii &&
           ndg.cond_iii;
  }
};

void run_classify(Stages& st, PipelineResult& out) {
  st.ndg = check_nondegeneracy(st.sys);
  RatMat a = to_rat_matrix(st.sys.x.linear_part());
  try {
    st.spectrum = eigenvalues_numeric(a);
  } catch (const error&) {
    // Spectrum stays empty; the nondegeneracy report carries the diagnosis.
  }

  if (!st.ndg.integrability.ok) {
    std::string w = "integrability violated at degree " +
                    std::to_string(*st.ndg.integrability.first_violation_degree) +
                    " (negative probe?)";
    out.warnings.push_back(std::move(w));
  }

  ordered_json j;
  if (st.spectrum) j["eigenvalues"] = spectrum_json(*st.spectrum);
  if (st.ndg.cls)
    j["classification"] = class_json(*st.ndg.cls);
  else
    j["classification_error"] = st.ndg.classification_error.value_or("unavailable");
  ordered_json nd;
  nd["cond_i"] = st.ndg.cond_i;
  nd["cond_ii"] = st.ndg.cond_ii;
  nd["cond_iii"] = st.ndg.cond_iii;
  nd["integrals_conserved"] = st.ndg.integrals_conserved;
  if (st.ndg.integrability.first_violation_degree)
    nd["first_violation_degree"] = *st.ndg.integrability.first_violation_degree;
  nd["independence_rank"] = st.ndg.independence.rank;
  nd["witness_minor"] = st.ndg.independence.minor.str();
  nd["linear_semisimple"] = st.ndg.linear_semisimple;
  nd["semisimple_part_nonzero"] = st.ndg.semisimple_part_nonzero;
  if (st.ndg.cls && st.ndg.cls->zero_count > 0) {
    nd["zero_block_rank"] = st.ndg.zero_block_rank;
    nd["integral_order"] = st.ndg.integral_order;
  }
  j["nondegeneracy"] = std::move(nd);
  out.report.update(j);
}

// Canonicalize, rescale, reduce. Returns false (with exit code set) when the
// hard prerequisites are missing.
bool run_canonical_stage(Stages& st, PipelineResult& out) {
  if (!st.ndg.cls) {
    out.report["error"] = "classification failed: " + st.ndg.classification_error.value_or("");
    out.exit_code = 1;
    return false;
  }
  if (!st.ndg.linear_semisimple) {
    out.report["error"] = "linear part is not semisimple";
    out.exit_code = 1;
    return false;
  }
  const SpectrumClass& cls = *st.ndg.cls;
  RatMat a = to_rat_matrix(st.sys.x.linear_part());
  st.canon = canonicalize_linear_part(a, cls);

  ordered_json cj;
  cj["basis"] = rat_matrix_json(st.canon->basis);
  cj["lambda"] = to_string(st.canon->lambda);
  cj["canonical_matrix"] = rat_matrix_json(st.canon->canonical);
  out.report["canonicalization"] = std::move(cj);

  int order = st.sys.order;
  auto t_inv = st.canon->basis.inverse();
  PolyMap to_canonical = PolyMap::linear(to_scalar_matrix(*t_inv), order);
  PolyMap from_canonical = PolyMap::linear(to_scalar_matrix(st.canon->basis), order);

  Scalar inv_lambda = Scalar(Rat(1) / st.canon->lambda);
  st.x_full = inv_lambda * pushforward(st.sys.x, to_canonical);

  // Integrals in canonical coordinates, condition-iii order first.
  for (int idx : st.ndg.integral_order)
    st.integrals_canon.push_back(
        st.sys.first_integrals[static_cast<std::size_t>(idx)].compose(
            from_canonical.components()));

  const CanonicalStructure& cs = st.canon->structure;
  if (cls.zero_count == 0) {
    st.x_work = st.x_full;
    st.cs_work = cs;
    st.integrals_work = st.integrals_canon;
  } else {
    if (!st.ndg.cond_iii) {
      out.report["error"] =
          "condition iii fails: no k-subset of integrals has independent differentials";
      out.exit_code = 1;
      return false;
    }
    IntegrableSystem canonical_sys;
    canonical_sys.x = *st.x_full;
    canonical_sys.first_integrals = st.integrals_canon;
    canonical_sys.order = order;
    st.family = reduce_zero_block(canonical_sys, cls);

    CanonicalStructure red;
    red.kind = cs.kind;
    red.n = cs.n - cs.zero_count;
    red.zero_count = 0;
    red.elliptic = cs.elliptic;
    red.blocks = cs.blocks;
    red.mhat.assign(cs.mhat.begin() + cs.zero_count, cs.mhat.end());
    st.cs_work = red;
    st.x_work = st.family->reduced_at_zero;

    // Remaining integrals restricted to the zero slice.
    int k = cls.zero_count, r = cs.n - k;
    std::vector<TruncatedSeries> slice_args;
    for (int i = 0; i < k; ++i) slice_args.emplace_back(r, order);
    for (int i = 0; i < r; ++i) slice_args.push_back(TruncatedSeries::variable(r, order, i));
    for (std::size_t i = static_cast<std::size_t>(k); i < st.integrals_canon.size(); ++i)
      st.integrals_work.push_back(st.integrals_canon[i].compose(slice_args));

    ordered_json fj;
    fj["parameter_count"] = st.family->parameter_count;
    fj["reduced_dimension"] = st.family->reduced_dimension;
    ordered_json centers = ordered_json::array();
    for (const auto& c : st.family->center) centers.push_back(series_to_json(c));
    fj["center_jet"] = std::move(centers);
    out.report["family"] = std::move(fj);
  }
  return true;
}

void run_invariants(Stages& st, PipelineResult& out) {
  const CanonicalStructure& cs = *st.cs_work;
  st.hilbert = hilbert_basis(ResonanceProblem{cs.mhat});
  st.gens = invariant_generators(cs, *st.hilbert, st.sys.order);

  // Annihilation check against the canonical linear field.
  VectorFieldJet x1 = VectorFieldJet::from_linear(
      to_scalar_matrix(integer_canonical_matrix(cs)), st.sys.order);
  bool annihilated = true;
  for (const auto& q : st.gens->real_forms)
    if (!lie_derivative(x1, q).is_zero()) annihilated = false;
  if (!annihilated) throw error(errc::internal, "invariant generator not annihilated");

  ordered_json j;
  ordered_json basis = ordered_json::array();
  for (const auto& g : st.hilbert->generators)
    basis.push_back(std::vector<int>(g.entries().begin(), g.entries().end()));
  j["hilbert_basis"] = std::move(basis);
  ordered_json monos = ordered_json::array();
  for (const auto& g : st.gens->monomials)
    monos.push_back(std::vector<int>(g.entries().begin(), g.entries().end()));
  j["monomials"] = std::move(monos);
  ordered_json forms = ordered_json::array();
  for (const auto& q : st.gens->real_forms) forms.push_back(series_to_json(q));
  j["real_forms"] = std::move(forms);
  j["annihilation_exact"] = annihilated;
  out.report["invariants"] = std::move(j);
}

void run_normalize(Stages& st, PipelineResult& out) {
  st.nf = geometric_normalize(*st.x_work, *st.cs_work);

  ordered_json nj;
  nj["residual_order"] = st.nf->residual_order;
  if (st.nf->obstruction) {
    ordered_json ob;
    ob["degree"] = st.nf->obstruction->degree;
    ordered_json terms = ordered_json::array();
    for (int i = 0; i < st.nf->obstruction->leftover.nvars(); ++i)
      terms.push_back(series_to_json(st.nf->obstruction->leftover.component(i)));
    ob["leftover"] = std::move(terms);
    ob["message"] = st.nf->obstruction->message;
    nj["obstruction"] = std::move(ob);
    out.report["normal_form"] = std::move(nj);
    out.exit_code = 1;
    return;
  }
  nj["obstruction"] = nullptr;

  st.nfv = verify_normal_form(*st.x_work, *st.nf);
  nj["residual_zero"] = st.nfv->residual_zero;
  nj["factor_unit_at_origin"] = st.nfv->factor_unit_at_origin;
  nj["factor_invariant"] = st.nfv->factor_invariant;
  if (!st.nfv->ok()) {
    out.report["normal_form"] = std::move(nj);
    out.report["error"] = "normal form verification failed";
    out.exit_code = 1;
    return;
  }

  ordered_json phis = ordered_json::array();
  for (const auto& c : st.nf->phi.components()) phis.push_back(series_to_json(c));
  nj["phi"] = std::move(phis);
  nj["factor"] = series_to_json(st.nf->factor);

  if (st.gens) {
    TruncatedSeries f0 = st.nf->factor;
    f0.set_coeff(Exponent(f0.nvars()), Scalar());
    try {
      TruncatedSeries rep = express_in_invariants(f0, *st.gens);
      rep.add_term(Exponent(rep.nvars()), Scalar(1));
      nj["factor_in_invariants"] = series_to_json(rep);
    } catch (const error& e) {
      nj["factor_in_invariants"] = nullptr;
      out.warnings.push_back(std::string("factor not represented in invariants: ") + e.what());
    }
  }
  out.report["normal_form"] = std::move(nj);

  // Transport of the (work-system) integrals.
  IntegrableSystem work_sys;
  work_sys.x = *st.x_work;
  work_sys.first_integrals = st.integrals_work;
  work_sys.order = st.sys.order;
  TransportResult tr = first_integral_transport(work_sys, *st.nf, st.gens ? &*st.gens : nullptr);
  ordered_json tj;
  ordered_json moved = ordered_json::array();
  for (const auto& f : tr.transported) moved.push_back(series_to_json(f));
  tj["integrals"] = std::move(moved);
  tj["annihilated"] = tr.annihilated;
  ordered_json reps = ordered_json::array();
  for (const auto& r : tr.in_invariants) reps.push_back(r ? series_to_json(*r) : ordered_json());
  tj["in_invariants"] = std::move(reps);
  out.report["transport"] = std::move(tj);

  // 2D weak-hyperbolic: the singular-locus jet from the canonical field.
  if (st.ndg.cls->kind == SpectrumCase::WeakHyperbolic && st.sys.x.nvars() == 2) {
    st.locus_jet = singular_locus_2d(*st.x_full);
    ordered_json lj;
    lj["hyperbolic_axis"] = st.locus_jet->hyperbolic_axis;
    lj["curve"] = series_to_json(st.locus_jet->curve);
    lj["field_vanishes_on_curve"] = st.locus_jet->field_vanishes_on_curve;
    out.report["singular_locus"] = std::move(lj);
  }
}

void run_verify(Stages& st, const SystemFile& sf, const PipelineOptions& opts,
                PipelineResult& out) {
  const NumericSection& num = sf.numeric;
  std::vector<double> radii = opts.radii.value_or(num.radii);
  std::uint64_t seed = opts.seed.value_or(num.seed);
  const SpectrumClass& cls = *st.ndg.cls;
  double lambda_f = to_double(st.canon->lambda);
  long long max_m = 0;
  for (long long b : st.cs_work->blocks) max_m = std::max(max_m, std::llabs(b));

  ordered_json vj;
  vj["seed"] = seed;
  vj["radii"] = radii;

  // Conservation along a trajectory of the original field.
  if (!st.sys.first_integrals.empty() && st.ndg.integrals_conserved) {
    int n = st.sys.x.nvars();
    double t_char = cls.elliptic() ? 2.0 * M_PI / (lambda_f * static_cast<double>(max_m))
                                   : 1.0 / (lambda_f * static_cast<double>(max_m));
    NumericField field(st.sys.x);
    std::vector<double> x0(static_cast<std::size_t>(n),
                           num.conservation_radius / std::sqrt(static_cast<double>(n)));
    IntegrateOptions io;
    io.rtol = num.rtol;
    io.atol = num.atol;
    io.ball = num.ball;
    Trajectory traj = integrate_flow(field.rhs(), x0, 5.0 * t_char, io);
    std::vector<CompiledSeries> integrals;
    for (const auto& f : st.sys.first_integrals) integrals.emplace_back(f);
    double drift = conservation_residual(traj, integrals);
    ordered_json cj;
    cj["characteristic_time"] = t_char;
    cj["time_span"] = 5.0 * t_char;
    cj["max_relative_drift"] = drift;
    cj["pass"] = drift < 1e-6;
    vj["conservation"] = std::move(cj);
  }

  // Elliptic: periods of Y = X / (F o Phi) in the original coordinates,
  // started along the image of the first canonical block axis; that block
  // dominates the orbit, so the first return lands at 2 pi / (lambda m_1).
  if (cls.kind == SpectrumCase::StrongElliptic && st.nf && !st.nf->obstruction) {
    int n = st.sys.x.nvars();
    auto t_inv = st.canon->basis.inverse();
    PolyMap to_canonical = PolyMap::linear(to_scalar_matrix(*t_inv), st.sys.order);
    PolyMap full_change = st.nf->phi.compose(to_canonical);
    TruncatedSeries factor_orig = st.nf->factor.compose(full_change.components());

    NumericField y_field(st.sys.x, factor_orig);
    FlatnessOptions fo;
    fo.exponent = num.flatness_exponent;
    fo.noise_floor = num.period_noise_floor;
    fo.period.integrate.rtol = std::min(num.rtol, 1e-12);
    fo.period.integrate.atol = std::min(num.atol, 1e-14);
    fo.period.integrate.ball = num.ball;
    fo.direction.assign(static_cast<std::size_t>(n), 0.0);
    double len = 0.0;
    for (int i = 0; i < n; ++i) {
      fo.direction[static_cast<std::size_t>(i)] = to_double(st.canon->basis(i, 0));
      len += fo.direction[static_cast<std::size_t>(i)] * fo.direction[static_cast<std::size_t>(i)];
    }
    len = std::sqrt(len);
    for (auto& c : fo.direction) c /= len;
    double lambda_eff = lambda_f * static_cast<double>(st.cs_work->blocks.front());
    ResidualCurve curve = period_flatness_scan(y_field, lambda_eff, radii, fo);
    vj["period_flatness"] = curve_json(curve);
    out.csv_sidecars.emplace_back("scan_period.csv", csv_of_curve(curve, "period_deviation"));
  }

  // Conjugacy residual decay in the work coordinates.
  if (st.nf && !st.nf->obstruction) {
    ConjugacyScanOptions co;
    co.samples = num.samples;
    co.seed = seed;
    co.noise_floor = num.conjugacy_noise_floor;
    co.min_slope = static_cast<double>(st.sys.order) + 0.5;
    ResidualCurve curve = conjugacy_residual_scan(*st.x_work, *st.nf, radii, co);
    vj["conjugacy_residual"] = curve_json(curve);
    out.csv_sidecars.emplace_back("scan_conjugacy.csv", csv_of_curve(curve, "residual"));
  }

  // 2D weak-hyperbolic: numeric singular locus against the jet curve.
  if (cls.kind == SpectrumCase::WeakHyperbolic && st.sys.x.nvars() == 2 && st.locus_jet) {
    NumericField field(*st.x_full);
    std::vector<double> ygrid;
    for (double y : {0.1, 0.075, 0.05, 0.025, 0.01}) {
      ygrid.push_back(y);
      ygrid.push_back(-y);
    }
    std::sort(ygrid.begin(), ygrid.end());
    LocusScan scan = singular_locus_scan_2d(field, ygrid, st.locus_jet->hyperbolic_axis);

    CompiledSeries jet(st.locus_jet->curve);
    double max_gap = 0.0;
    for (std::size_t i = 0; i < scan.y.size(); ++i) {
      double predicted = jet.evaluate(std::span<const double>(&scan.y[i], 1));
      max_gap = std::max(max_gap, std::abs(predicted - scan.x[i]));
    }
    ordered_json lj;
    lj["y"] = scan.y;
    lj["x"] = scan.x;
    lj["field_norm"] = scan.field_norm;
    lj["max_field_norm"] = scan.max_field_norm;
    lj["max_jet_gap"] = max_gap;
    lj["max_second_difference"] = scan.max_second_difference;
    bool pass = scan.max_field_norm < 1e-8 && max_gap < 1e-6 &&
                st.locus_jet->field_vanishes_on_curve;
    lj["pass"] = pass;
    vj["singular_locus"] = std::move(lj);
    std::string csv = "y,x,field_norm\n";
    char buf[120];
    for (std::size_t i = 0; i < scan.y.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", scan.y[i], scan.x[i],
                    scan.field_norm[i]);
      csv += buf;
    }
    out.csv_sidecars.emplace_back("scan_locus.csv", std::move(csv));
  }

  out.report["numeric"] = std::move(vj);
}

void finish_verdicts(Stages& st, PipelineResult& out) {
  ordered_json v;
  v["hypotheses_ok"] = st.hypotheses_ok();
  if (st.nf && st.nf->obstruction)
    v["obstruction_degree"] = st.nf->obstruction->degree;
  else
    v["obstruction_degree"] = nullptr;
  bool ok = st.hypotheses_ok() && (!st.nf || !st.nf->obstruction);
  if (st.nfv) ok = ok && st.nfv->ok();
  if (out.report.contains("numeric")) {
    const auto& num = out.report["numeric"];
    for (const char* key : {"conservation", "period_flatness", "conjugacy_residual",
                            "singular_locus"}) {
      if (num.contains(key)) {
        bool pass = num[key]["pass"].get<bool>();
        v[std::string(key) + "_pass"] = pass;
        ok = ok && pass;
      }
    }
  }
  v["overall"] = ok;
  out.report["verdicts"] = std::move(v);
  if (!ok && out.exit_code == 0) out.exit_code = 1;
}

}  // namespace

PipelineResult run_pipeline(const std::string& command, const SystemFile& sf,
                            const PipelineOptions& opts) {
  PipelineResult out;
  out.report["command"] = command;
  out.report["dimension"] = sf.dimension;
  int order = opts.order.value_or(sf.order);
  out.report["order"] = order;

  Stages st;
  st.sys = sf.to_system(order);

  try {
    run_classify(st, out);
    if (command == "classify") {
      if (!st.hypotheses_ok()) out.exit_code = 1;
      ordered_json v;
      v["hypotheses_ok"] = st.hypotheses_ok();
      out.report["verdicts"] = std::move(v);
      return out;
    }

    if (!run_canonical_stage(st, out)) return out;
    run_invariants(st, out);
    if (command == "invariants") {
      if (!st.hypotheses_ok()) out.exit_code = 1;
      ordered_json v;
      v["hypotheses_ok"] = st.hypotheses_ok();
      out.report["verdicts"] = std::move(v);
      return out;
    }

    run_normalize(st, out);
    if (command == "normalize") {
      finish_verdicts(st, out);
      return out;
    }

    if (command == "verify" || command == "report") {
      run_verify(st, sf, opts, out);
      finish_verdicts(st, out);
      return out;
    }
    throw error(errc::parse, "unknown command: " + command);
  } catch (const error& e) {
    out.report["error"] = std::string(errc_name(e.kind())) + ": " + e.what();
    switch (e.kind()) {
      case errc::parse:
        out.exit_code = 2;
        break;
      case errc::no_return:
      case errc::step_size_underflow:
      case errc::left_domain:
      case errc::root_not_bracketed:
      case errc::convergence_failure:
        out.exit_code = 3;
        break;
      default:
        out.exit_code = 1;
        break;
    }
    return out;
  }
}

}  // namespace nfforge
