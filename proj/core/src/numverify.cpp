#include "nfforge/numverify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <random>
#include <thread>

namespace nfforge {

int scan_thread_cap() {
  static int cap = [] {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("NFFORGE_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) n = std::min<long>(v, 64);
    }
    return n;
  }();
  return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  int threads = std::min<std::size_t>(static_cast<std::size_t>(scan_thread_cap()), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  for (int t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    }));
  }
  for (auto& w : workers) w.get();
}

namespace {

double powi(double base, std::int32_t e) {
  double acc = 1.0;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

CompiledSeries::CompiledSeries(const TruncatedSeries& s) : nvars_(s.nvars()) {
  for (const auto& [alpha, c] : s.terms()) {
    if (!c.im.is_zero())
      throw error(errc::internal, "CompiledSeries needs real coefficients");
    coeff_.push_back(to_double(c.re));
    for (int j = 0; j < nvars_; ++j) expo_.push_back(alpha[j]);
  }
}

double CompiledSeries::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != nvars_)
    throw error(errc::dimension_mismatch, "CompiledSeries evaluate");
  double sum = 0.0, comp = 0.0;
  const std::int32_t* e = expo_.data();
  for (std::size_t k = 0; k < coeff_.size(); ++k, e += nvars_) {
    double term = coeff_[k];
    for (int j = 0; j < nvars_; ++j)
      if (e[j]) term *= powi(x[static_cast<std::size_t>(j)], e[j]);
    double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

NumericField::NumericField(const VectorFieldJet& x) : n_(x.nvars()) {
  for (int i = 0; i < n_; ++i) comps_.emplace_back(x.component(i));
}

NumericField::NumericField(const VectorFieldJet& x, const TruncatedSeries& divisor)
    : NumericField(x) {
  divisor_.emplace(divisor);
}

void NumericField::evaluate(std::span<const double> x, std::span<double> out) const {
  for (int i = 0; i < n_; ++i)
    out[static_cast<std::size_t>(i)] = comps_[static_cast<std::size_t>(i)].evaluate(x);
  if (perturb_) {
    std::vector<double> add(static_cast<std::size_t>(n_), 0.0);
    perturb_(x, add);
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] += add[static_cast<std::size_t>(i)];
  }
  if (divisor_) {
    double d = divisor_->evaluate(x);
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] /= d;
  }
}

std::vector<double> NumericField::evaluate(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  evaluate(x, out);
  return out;
}

OdeRhs NumericField::rhs() const {
  return [this](std::span<const double> y, std::span<double> dydt) { evaluate(y, dydt); };
}

double conservation_residual(const Trajectory& traj, std::span<const CompiledSeries> integrals,
                             int dense_samples) {
  if (integrals.empty()) return 0.0;
  int n = traj.dimension();
  std::vector<double> point(static_cast<std::size_t>(n));

  std::vector<std::vector<double>> samples;
  for (const auto& seg : traj.segments()) {
    traj.state_at(seg.t0, point);
    samples.push_back(point);
  }
  for (int k = 0; k <= dense_samples; ++k) {
    double t = traj.t_begin() +
               (traj.t_end() - traj.t_begin()) * static_cast<double>(k) / dense_samples;
    traj.state_at(t, point);
    samples.push_back(point);
  }

  double worst = 0.0;
  for (const auto& f : integrals) {
    double ref = f.evaluate(samples.front());
    double scale = std::abs(ref);
    double drift = 0.0;
    for (const auto& s : samples) {
      double v = f.evaluate(s);
      scale = std::max(scale, std::abs(v));
      drift = std::max(drift, std::abs(v - ref));
    }
    worst = std::max(worst, scale > 0.0 ? drift / scale : drift);
  }
  return worst;
}

PeriodEstimate detect_period(const NumericField& f, std::span<const double> x0,
                             double expected_period, const PeriodOptions& opts) {
  int n = f.dimension();
  if (expected_period <= 0.0) throw error(errc::internal, "expected period must be positive");
  std::vector<double> v0 = f.evaluate(x0);
  double speed = norm2(v0);
  if (speed <= 0.0) throw error(errc::no_return, "field vanishes at the initial point");
  std::vector<double> u(v0);
  for (auto& c : u) c /= speed;

  // A trajectory escaping the working ball is not elliptic-like; scan
  // whatever was integrated and report no_return if nothing crosses.
  IntegrateOptions io = opts.integrate;
  io.stop_on_leave = true;
  Trajectory traj = integrate_flow(f.rhs(), x0, 3.0 * expected_period, io);

  auto section = [&](std::span<const double> p) {
    double g = 0.0;
    for (int i = 0; i < n; ++i)
      g += (p[static_cast<std::size_t>(i)] - x0[static_cast<std::size_t>(i)]) *
           u[static_cast<std::size_t>(i)];
    return g;
  };
  auto crossing_speed = [&](std::span<const double> p) {
    std::vector<double> v = f.evaluate(p);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
    return s;
  };

  PeriodEstimate est;
  est.x0.assign(x0.begin(), x0.end());
  est.section_normal = u;

  const int sub = 8;
  double t_min = 1e-3 * expected_period;
  std::vector<double> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
  for (const auto& seg : traj.segments()) {
    for (int k = 0; k < sub; ++k) {
      double ta = seg.t0 + seg.h * k / sub;
      double tb = seg.t0 + seg.h * (k + 1) / sub;
      if (tb <= t_min) continue;
      traj.state_at(ta, p);
      traj.state_at(tb, q);
      double ga = section(p), gb = section(q);
      if (!(ga < 0.0 && gb >= 0.0)) continue;  // positive-oriented crossing
      ++est.crossings_seen;
      // Bisection on the dense output.
      double lo = ta, hi = tb;
      while (hi - lo > opts.time_tol * std::max(1.0, expected_period)) {
        double mid = 0.5 * (lo + hi);
        traj.state_at(mid, p);
        if (section(p) < 0.0)
          lo = mid;
        else
          hi = mid;
      }
      double tc = 0.5 * (lo + hi);
      traj.state_at(tc, p);
      if (std::abs(crossing_speed(p)) < opts.crossing_speed_min) continue;  // grazing
      est.period = tc;
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double d = p[static_cast<std::size_t>(i)] - x0[static_cast<std::size_t>(i)];
        d2 += d * d;
      }
      est.return_distance = std::sqrt(d2);
      return est;
    }
  }
  throw error(errc::no_return, "no section return within three expected periods");
}

ResidualCurve fit_decay(std::span<const double> radii, std::span<const double> values,
                        double noise_floor, double pass_slope) {
  ResidualCurve out;
  out.radii.assign(radii.begin(), radii.end());
  out.values.assign(values.begin(), values.end());
  out.noise_floor = noise_floor;

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (values[i] > noise_floor) {
      lx.push_back(std::log(radii[i]));
      ly.push_back(std::log(values[i]));
    }
  }
  out.fitted_points = static_cast<int>(lx.size());
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    out.pass = out.slope >= pass_slope;
  } else {
    // Everything at the noise floor: decay faster than measurable.
    out.slope = std::numeric_limits<double>::infinity();
    out.pass = true;
  }
  return out;
}

ResidualCurve period_flatness_scan(const NumericField& f, double lambda,
                                   std::span<const double> radii, const FlatnessOptions& opts) {
  int n = f.dimension();
  double target = 2.0 * M_PI / lambda;
  std::vector<double> dir = opts.direction;
  if (dir.empty()) {
    dir.assign(static_cast<std::size_t>(n), 0.0);
    dir[0] = 1.0;
  }
  std::vector<double> deviations(radii.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  parallel_for(radii.size(), [&](std::size_t ri) {
    try {
      double r = radii[ri];
      std::vector<double> x0(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        x0[static_cast<std::size_t>(i)] = r * dir[static_cast<std::size_t>(i)];
      PeriodEstimate est = detect_period(f, x0, target, opts.period);
      deviations[ri] = std::abs(est.period - target);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return fit_decay(radii, deviations, opts.noise_floor, opts.exponent);
}

ResidualCurve conjugacy_residual_scan(const VectorFieldJet& x, const GeometricNormalForm& nf,
                                      std::span<const double> radii,
                                      const ConjugacyScanOptions& opts) {
  int n = x.nvars();
  NumericField field(x);
  std::vector<CompiledSeries> phi;
  std::vector<CompiledSeries> dphi;  // row-major n x n
  for (int i = 0; i < n; ++i) {
    phi.emplace_back(nf.phi.component(i));
    for (int j = 0; j < n; ++j) dphi.emplace_back(nf.phi.component(i).derivative(j));
  }
  CompiledSeries factor(nf.factor);
  RatMat lin = to_rat_matrix(nf.linear_canonical);
  std::vector<double> lind(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lind[static_cast<std::size_t>(i * n + j)] = to_double(lin(i, j));

  std::vector<double> values(radii.size());
  parallel_for(radii.size(), [&](std::size_t ri) {
    double r = radii[ri];
    // Per-radius seeding keeps the scan deterministic under parallelism.
    std::mt19937_64 rng(opts.seed + 0x9e3779b97f4a7c15ULL * (ri + 1));
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < opts.samples; ++s) {
      std::vector<double> p(static_cast<std::size_t>(n));
      double len = 0.0;
      for (auto& c : p) {
        c = gauss(rng);
        len += c * c;
      }
      len = std::sqrt(len);
      for (auto& c : p) c *= r / len;

      std::vector<double> xv = field.evaluate(p);
      std::vector<double> yv(static_cast<std::size_t>(n));  // Phi(p)
      for (int i = 0; i < n; ++i) yv[static_cast<std::size_t>(i)] = phi[static_cast<std::size_t>(i)].evaluate(p);
      double fv = factor.evaluate(yv);

      double res2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double push = 0.0;
        for (int j = 0; j < n; ++j)
          push += dphi[static_cast<std::size_t>(i * n + j)].evaluate(p) * xv[static_cast<std::size_t>(j)];
        double target = 0.0;
        for (int j = 0; j < n; ++j)
          target += lind[static_cast<std::size_t>(i * n + j)] * yv[static_cast<std::size_t>(j)];
        double d = push - fv * target;
        res2 += d * d;
      }
      worst = std::max(worst, std::sqrt(res2));
    }
    values[ri] = worst;
  });
  return fit_decay(radii, values, opts.noise_floor, opts.min_slope);
}

LocusScan singular_locus_scan_2d(const NumericField& f, std::span<const double> ygrid,
                                 int hyperbolic_axis, double root_tol) {
  if (f.dimension() != 2) throw error(errc::dimension_mismatch, "locus scan needs n = 2");
  int h = hyperbolic_axis;
  LocusScan out;
  for (double yv : ygrid) {
    double lim = std::abs(yv);
    auto comp = [&](double xv) {
      std::vector<double> p(2);
      p[static_cast<std::size_t>(h)] = xv;
      p[static_cast<std::size_t>(1 - h)] = yv;
      return f.evaluate(p)[static_cast<std::size_t>(h)];
    };
    double lo = -lim, hi = lim;
    double flo = comp(lo), fhi = comp(hi);
    if (flo == 0.0)
      hi = lo;
    else if (fhi == 0.0)
      lo = hi;
    else if (flo * fhi > 0.0)
      throw error(errc::root_not_bracketed,
                  "component does not change sign inside the cone |x| <= |y|");
    while (hi - lo > root_tol * std::max(1.0, lim)) {
      double mid = 0.5 * (lo + hi);
      double fm = comp(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    double xr = 0.5 * (lo + hi);
    std::vector<double> p(2);
    p[static_cast<std::size_t>(h)] = xr;
    p[static_cast<std::size_t>(1 - h)] = yv;
    double fn = norm2(f.evaluate(p));
    out.y.push_back(yv);
    out.x.push_back(xr);
    out.field_norm.push_back(fn);
    out.max_field_norm = std::max(out.max_field_norm, fn);
  }
  // Divided-difference regularity of x(y).
  for (std::size_t i = 2; i < out.y.size(); ++i) {
    double d1a = (out.x[i - 1] - out.x[i - 2]) / (out.y[i - 1] - out.y[i - 2]);
    double d1b = (out.x[i] - out.x[i - 1]) / (out.y[i] - out.y[i - 1]);
    double d2 = (d1b - d1a) / (out.y[i] - out.y[i - 2]);
    out.max_second_difference = std::max(out.max_second_difference, std::abs(d2));
  }
  return out;
}

}  // namespace nfforge
