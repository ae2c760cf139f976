#include "nfforge/ode.hpp"

#include <algorithm>
#include <cmath>

namespace nfforge {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void Trajectory::state_at(double t, std::span<double> out) const {
  if (segments_.empty()) throw error(errc::internal, "empty trajectory");
  double lo = t0_, hi = t1_;
  if (t < lo - 1e-12 * std::max(1.0, std::abs(hi)) ||
      t > hi + 1e-12 * std::max(1.0, std::abs(hi)))
    throw error(errc::internal, "dense output query outside the integrated span");
  // Binary search for the segment containing t.
  std::size_t lo_i = 0, hi_i = segments_.size() - 1;
  while (lo_i < hi_i) {
    std::size_t mid = (lo_i + hi_i + 1) / 2;
    if (segments_[mid].t0 <= t)
      lo_i = mid;
    else
      hi_i = mid - 1;
  }
  const Segment& s = segments_[lo_i];
  double theta = std::clamp((t - s.t0) / s.h, 0.0, 1.0);
  double om = 1.0 - theta;
  for (int i = 0; i < dim_; ++i) {
    auto idx = static_cast<std::size_t>(i);
    out[idx] = s.r1[idx] +
               theta * (s.r2[idx] + om * (s.r3[idx] + theta * (s.r4[idx] + om * s.r5[idx])));
  }
}

std::vector<double> Trajectory::state_at(double t) const {
  std::vector<double> out(static_cast<std::size_t>(dim_));
  state_at(t, out);
  return out;
}

Trajectory integrate_flow(const OdeRhs& f, std::span<const double> x0, double t_final,
                          const IntegrateOptions& opts) {
  if (t_final <= 0.0) throw error(errc::internal, "integrate_flow needs t_final > 0");
  int n = static_cast<int>(x0.size());
  auto sz = static_cast<std::size_t>(n);

  Trajectory traj;
  traj.dim_ = n;
  traj.t0_ = 0.0;

  std::vector<double> y(x0.begin(), x0.end());
  std::vector<double> k1(sz), k2(sz), k3(sz), k4(sz), k5(sz), k6(sz), k7(sz), ytmp(sz), ynew(sz);

  if (max_norm(y) > opts.ball) throw error(errc::left_domain, "initial point outside the ball");
  f(y, k1);

  double h = opts.initial_step;
  if (h <= 0.0) {
    double fn = max_norm(k1);
    double yn = std::max(max_norm(y), 1e-6);
    h = fn > 0.0 ? 0.01 * yn / fn : 1e-3;
    h = std::min(h, t_final);
  }

  double t = 0.0;
  while (t < t_final) {
    if (traj.accepted_ + traj.rejected_ > opts.max_steps)
      throw error(errc::convergence_failure, "integrate_flow exceeded max steps");
    h = std::min(h, t_final - t);
    if (h < 1e-14 * std::max(1.0, t_final))
      throw error(errc::step_size_underflow, "step size underflow");

    auto stage = [&](std::vector<double>& out, auto&&... terms) {
      for (int i = 0; i < n; ++i) {
        auto idx = static_cast<std::size_t>(i);
        double acc = 0.0;
        ((acc += terms.first * terms.second[idx]), ...);
        out[idx] = y[idx] + h * acc;
      }
    };
    using P = std::pair<double, const std::vector<double>&>;
    stage(ytmp, P{a21, k1});
    f(ytmp, k2);
    stage(ytmp, P{a31, k1}, P{a32, k2});
    f(ytmp, k3);
    stage(ytmp, P{a41, k1}, P{a42, k2}, P{a43, k3});
    f(ytmp, k4);
    stage(ytmp, P{a51, k1}, P{a52, k2}, P{a53, k3}, P{a54, k4});
    f(ytmp, k5);
    stage(ytmp, P{a61, k1}, P{a62, k2}, P{a63, k3}, P{a64, k4}, P{a65, k5});
    f(ytmp, k6);
    stage(ynew, P{b1, k1}, P{b3, k3}, P{b4, k4}, P{b5, k5}, P{b6, k6});
    f(ynew, k7);

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      auto idx = static_cast<std::size_t>(i);
      double ei = h * (e1 * k1[idx] + e3 * k3[idx] + e4 * k4[idx] + e5 * k5[idx] +
                       e6 * k6[idx] + e7 * k7[idx]);
      double sc = opts.atol + opts.rtol * std::max(std::abs(y[idx]), std::abs(ynew[idx]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / n);

    if (err <= 1.0) {
      Trajectory::Segment seg;
      seg.t0 = t;
      seg.h = h;
      seg.r1.resize(sz);
      seg.r2.resize(sz);
      seg.r3.resize(sz);
      seg.r4.resize(sz);
      seg.r5.resize(sz);
      for (int i = 0; i < n; ++i) {
        auto idx = static_cast<std::size_t>(i);
        double dy = ynew[idx] - y[idx];
        double bspl = h * k1[idx] - dy;
        seg.r1[idx] = y[idx];
        seg.r2[idx] = dy;
        seg.r3[idx] = bspl;
        seg.r4[idx] = dy - h * k7[idx] - bspl;
        seg.r5[idx] = h * (d1 * k1[idx] + d3 * k3[idx] + d4 * k4[idx] + d5 * k5[idx] +
                           d6 * k6[idx] + d7 * k7[idx]);
      }
      traj.segments_.push_back(std::move(seg));
      ++traj.accepted_;
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      if (max_norm(y) > opts.ball) {
        if (opts.stop_on_leave) {
          traj.left_early_ = true;
          break;
        }
        throw error(errc::left_domain, "trajectory left the working ball");
      }
      double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
    } else {
      ++traj.rejected_;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }
  traj.t1_ = t;
  return traj;
}

}  // namespace nfforge
