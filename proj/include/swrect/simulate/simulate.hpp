#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "swrect/design/design.hpp"

namespace swrect::simulate {

using design::Controller;
using numlin::Matrix;
using numlin::Vector;

/// Piecewise-constant mode sequence: mode[j] is active on
/// [breakpoints[j], breakpoints[j+1]), the last interval ending at horizon.
struct SwitchingSignal {
  std::vector<double> breakpoints;
  std::vector<int> modes;
  double horizon = 0.0;

  std::size_t intervals() const { return modes.size(); }
  double start(std::size_t j) const { return breakpoints[j]; }
  double end(std::size_t j) const { return j + 1 < breakpoints.size() ? breakpoints[j + 1] : horizon; }
  /// Right-continuous mode lookup.
  int mode_at(double t) const;
};

/// Alternates 1, 2, 1, ... with dwell times dur1, dur2 until horizon.
SwitchingSignal periodic_signal(double dur1, double dur2, double horizon);
SwitchingSignal constant_signal(int mode, double horizon);
/// Dwell times uniform in [min_dwell, max_dwell], next mode a fair coin flip.
SwitchingSignal random_signal(std::uint64_t seed, double horizon, double min_dwell = 0.05, double max_dwell = 1.0);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> outputs;
  std::vector<Vector> errors;  // r - y
  std::vector<int> modes;
  Vector r;
};

/// Exact propagation in the shared eigenbasis: each modal coordinate decays
/// with the rate of the active subsystem. Samples every interval on
/// samples_per_interval equal steps, breakpoints and horizon included.
Trajectory simulate_modal(const Controller& c, const Vector& x0, const SwitchingSignal& sig,
                          int samples_per_interval = 64);

/// Same propagation evaluated at caller-chosen ascending times in [0, horizon].
Trajectory simulate_modal_at(const Controller& c, const Vector& x0, const SwitchingSignal& sig,
                             const std::vector<double>& times);

/// Classical RK4 on x' = (A_q + B_q F_q) x + B_q G_q; the step is shrunk per
/// interval so that every breakpoint is hit exactly.
Trajectory simulate_rk4(const Controller& c, const sysmodel::SwitchedPlant& plant, const Vector& x0,
                        const SwitchingSignal& sig, double step);

/// Largest state discrepancy relative to the largest state norm seen.
double relative_sup_distance(const Trajectory& a, const Trajectory& b);

inline constexpr double kShapeTol = 1e-6;

/// Per output: true when e_k takes both signs beyond tol max(1, |r_k|).
std::vector<bool> detect_overshoot(const Trajectory& tr, double tol = kShapeTol);
/// Per output: true when |e_k| never grows and e_k keeps its sign, within the
/// same slack.
std::vector<bool> detect_monotonic(const Trajectory& tr, double tol = kShapeTol);

/// Per output, interval-by-interval check of the exponential-sum rules on the
/// modal coefficients at each switching instant.
std::vector<design::ShapeVerdict> analytic_shape(const Controller& c, const Vector& x0, const SwitchingSignal& sig);

/// Largest jump of dy_k/dt across breakpoints, divided by max |dy_k/dt| over
/// the samples of tr (a modal trajectory of the same run).
double derivative_jump(const Controller& c, const Vector& x0, const SwitchingSignal& sig, const Trajectory& tr,
                       int k);

/// Header t,x1..xn,y1..yp,e1..ep,mode; numbers with 17 significant digits.
void write_csv(std::ostream& os, const Trajectory& tr);

}  // namespace swrect::simulate
