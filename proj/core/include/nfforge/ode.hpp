#ifndef NFFORGE_ODE_HPP
#define NFFORGE_ODE_HPP

#include <functional>
#include <span>
#include <vector>

#include "nfforge/errors.hpp"

namespace nfforge {

using OdeRhs = std::function<void(std::span<const double> y, std::span<double> dydt)>;

struct IntegrateOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double ball = 2.0;       // working-domain bound in the max norm
  long max_steps = 2000000;
  double initial_step = 0.0;   // 0: choose automatically
  bool stop_on_leave = false;  // stop cleanly at the ball instead of throwing
};

// Dormand-Prince 5(4) with the classic quartic dense-output interpolant.
class Trajectory {
 public:
  struct Segment {
    double t0, h;
    std::vector<double> r1, r2, r3, r4, r5;  // interpolant coefficients
  };

  int dimension() const { return dim_; }
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  const std::vector<Segment>& segments() const { return segments_; }
  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }
  bool left_domain_early() const { return left_early_; }

  // Dense-output state at any t in [t_begin, t_end].
  std::vector<double> state_at(double t) const;
  void state_at(double t, std::span<double> out) const;

 private:
  friend Trajectory integrate_flow(const OdeRhs&, std::span<const double>, double,
                                   const IntegrateOptions&);
  int dim_ = 0;
  double t0_ = 0.0, t1_ = 0.0;
  long accepted_ = 0, rejected_ = 0;
  bool left_early_ = false;
  std::vector<Segment> segments_;
};

// Integrates dy/dt = f(y) from y(0) = x0 over [0, t_final] (t_final > 0).
// Throws step_size_underflow and left_domain.
Trajectory integrate_flow(const OdeRhs& f, std::span<const double> x0, double t_final,
                          const IntegrateOptions& opts = {});

}  // namespace nfforge

#endif
