#include "swrect/simulate/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

namespace swrect::simulate {

int SwitchingSignal::mode_at(double t) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - breakpoints.begin()) - 1));
  return modes[std::min(j, modes.size() - 1)];
}

SwitchingSignal periodic_signal(double dur1, double dur2, double horizon) {
  if (!(dur1 > 0) || !(dur2 > 0)) throw std::invalid_argument("dwell times must be positive");
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");
  SwitchingSignal s;
  s.horizon = horizon;
  // Breakpoints are recomputed from the cycle count to avoid drift.
  for (long j = 0;; ++j) {
    const long cycles = j / 2;
    const double t = cycles * (dur1 + dur2) + (j % 2 ? dur1 : 0.0);
    if (t >= horizon) break;
    s.breakpoints.push_back(t);
    s.modes.push_back(j % 2 ? 2 : 1);
  }
  return s;
}

SwitchingSignal constant_signal(int mode, double horizon) {
  if (mode != 1 && mode != 2) throw std::invalid_argument("mode must be 1 or 2");
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");
  return {{0.0}, {mode}, horizon};
}

SwitchingSignal random_signal(std::uint64_t seed, double horizon, double min_dwell, double max_dwell) {
  if (!(min_dwell > 0) || max_dwell < min_dwell) throw std::invalid_argument("bad dwell range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dwell(min_dwell, max_dwell);
  std::bernoulli_distribution coin(0.5);
  SwitchingSignal s;
  s.horizon = horizon;
  double t = 0.0;
  while (t < horizon) {
    s.breakpoints.push_back(t);
    s.modes.push_back(coin(rng) ? 2 : 1);
    t += dwell(rng);
  }
  return s;
}

namespace {

void push_sample(Trajectory& tr, const Matrix& c, double t, const Vector& x, int mode) {
  tr.times.push_back(t);
  tr.states.push_back(x);
  Vector y = c * x;
  tr.errors.push_back(tr.r - y);
  tr.outputs.push_back(std::move(y));
  tr.modes.push_back(mode);
}

std::vector<double> standard_grid(const SwitchingSignal& sig, int samples) {
  if (samples < 1) throw std::invalid_argument("samples_per_interval must be positive");
  std::vector<double> times;
  for (std::size_t j = 0; j < sig.intervals(); ++j) {
    const double a = sig.start(j), b = sig.end(j);
    for (int s = 0; s < samples; ++s) times.push_back(a + (b - a) * s / samples);
  }
  times.push_back(sig.horizon);
  return times;
}

}  // namespace

Trajectory simulate_modal_at(const Controller& c, const Vector& x0, const SwitchingSignal& sig,
                             const std::vector<double>& times) {
  Trajectory tr;
  tr.r = c.ss.r;
  const Vector rates1 = c.modal_rates(1), rates2 = c.modal_rates(2);
  Vector coeff = numlin::solve(c.V, x0 - c.ss.x_ss).col(0);
  std::size_t j = 0;
  double t_j = 0.0;
  for (double t : times) {
    // Advance whole intervals that end at or before t.
    while (j + 1 < sig.intervals() && sig.end(j) <= t) {
      const Vector& rates = sig.modes[j] == 1 ? rates1 : rates2;
      coeff = (coeff.array() * (rates.array() * (sig.end(j) - t_j)).exp()).matrix();
      t_j = sig.end(j);
      ++j;
    }
    const Vector& rates = sig.modes[j] == 1 ? rates1 : rates2;
    const Vector now = (coeff.array() * (rates.array() * (t - t_j)).exp()).matrix();
    push_sample(tr, c.C, t, c.ss.x_ss + c.V * now, sig.modes[j]);
  }
  return tr;
}

Trajectory simulate_modal(const Controller& c, const Vector& x0, const SwitchingSignal& sig,
                          int samples_per_interval) {
  return simulate_modal_at(c, x0, sig, standard_grid(sig, samples_per_interval));
}

Trajectory simulate_rk4(const Controller& c, const sysmodel::SwitchedPlant& plant, const Vector& x0,
                        const SwitchingSignal& sig, double step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  Trajectory tr;
  tr.r = c.ss.r;
  Matrix a[2];
  Vector g[2];
  for (int q : {1, 2}) {
    a[q - 1] = plant.sub(q).A + plant.sub(q).B * c.F(q);
    g[q - 1] = plant.sub(q).B * c.G(q);
  }
  Vector x = x0;
  push_sample(tr, c.C, 0.0, x, sig.modes.front());
  for (std::size_t j = 0; j < sig.intervals(); ++j) {
    const int q = sig.modes[j];
    const Matrix& m = a[q - 1];
    const Vector& b = g[q - 1];
    const double t0 = sig.start(j), len = sig.end(j) - t0;
    const long steps = std::max(1L, static_cast<long>(std::ceil(len / step - 1e-9)));
    const double h = len / static_cast<double>(steps);
    auto f = [&](const Vector& v) -> Vector { return m * v + b; };
    for (long s = 1; s <= steps; ++s) {
      const Vector k1 = f(x);
      const Vector k2 = f(x + 0.5 * h * k1);
      const Vector k3 = f(x + 0.5 * h * k2);
      const Vector k4 = f(x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double t = s == steps ? sig.end(j) : t0 + h * static_cast<double>(s);
      const int mode = (s == steps && j + 1 < sig.intervals()) ? sig.modes[j + 1] : q;
      push_sample(tr, c.C, t, x, mode);
    }
  }
  return tr;
}

double relative_sup_distance(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size()) throw std::invalid_argument("trajectories sampled differently");
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    scale = std::max({scale, a.states[i].lpNorm<Eigen::Infinity>(), b.states[i].lpNorm<Eigen::Infinity>()});
    worst = std::max(worst, (a.states[i] - b.states[i]).lpNorm<Eigen::Infinity>());
  }
  return scale > 0 ? worst / scale : worst;
}

std::vector<bool> detect_overshoot(const Trajectory& tr, double tol) {
  if (tol < 0) throw std::invalid_argument("tolerance must be non-negative");
  const Eigen::Index p = tr.r.size();
  std::vector<bool> out(p, false);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double slack = tol * std::max(1.0, std::abs(tr.r(k)));
    bool pos = false, neg = false;
    for (const auto& e : tr.errors) {
      pos = pos || e(k) > slack;
      neg = neg || e(k) < -slack;
    }
    out[k] = pos && neg;
  }
  return out;
}

std::vector<bool> detect_monotonic(const Trajectory& tr, double tol) {
  const std::vector<bool> over = detect_overshoot(tr, tol);
  const Eigen::Index p = tr.r.size();
  std::vector<bool> out(p, false);
  for (Eigen::Index k = 0; k < p; ++k) {
    const double slack = tol * std::max(1.0, std::abs(tr.r(k)));
    bool mono = !over[k];
    for (std::size_t i = 1; mono && i < tr.errors.size(); ++i)
      mono = std::abs(tr.errors[i](k)) <= std::abs(tr.errors[i - 1](k)) + slack;
    out[k] = mono;
  }
  return out;
}

std::vector<design::ShapeVerdict> analytic_shape(const Controller& c, const Vector& x0, const SwitchingSignal& sig) {
  const auto& part = c.plan.partitioning;
  const Vector rates1 = c.modal_rates(1), rates2 = c.modal_rates(2);
  Vector coeff = numlin::solve(c.V, x0 - c.ss.x_ss).col(0);
  std::vector<design::ShapeVerdict> out(part.p(), design::ShapeVerdict{true, false, "no sign change"});
  std::vector<int> sign(part.p(), 0);
  for (std::size_t j = 0; j < sig.intervals(); ++j) {
    for (int k = 1; k <= part.p(); ++k) {
      if (!out[k - 1].pass) continue;
      std::vector<double> w;
      double start = 0.0;
      for (std::size_t col = 0; col < c.columns.size(); ++col)
        if (c.columns[col].first == k) {
          w.push_back(coeff(col) * c.C.row(k - 1).dot(c.V.col(col)));
          start += w.back();
        }
      design::ShapeVerdict v{true, false, "single exponential"};
      if (w.size() == 2) v = design::two_term_rule(w[0], w[1]);
      if (w.size() >= 3) v = design::three_term_rule(w[0], w[1], w[2]);
      const int s = start > 0 ? 1 : (start < 0 ? -1 : 0);
      if (s != 0 && sign[k - 1] != 0 && s != sign[k - 1]) v = {false, false, "sign flips at a switch"};
      if (s != 0) sign[k - 1] = s;
      if (!v.pass) {
        v.rule += " on interval " + std::to_string(j);
        out[k - 1] = v;
      }
    }
    const Vector& rates = sig.modes[j] == 1 ? rates1 : rates2;
    coeff = (coeff.array() * (rates.array() * (sig.end(j) - sig.start(j))).exp()).matrix();
  }
  return out;
}

double derivative_jump(const Controller& c, const Vector& x0, const SwitchingSignal& sig, const Trajectory& tr,
                       int k) {
  const Vector rates1 = c.modal_rates(1), rates2 = c.modal_rates(2);
  const Eigen::RowVectorXd ck = c.C.row(k - 1) * c.V;
  auto slope = [&](const Vector& coeff, int mode) {
    const Vector& rates = mode == 1 ? rates1 : rates2;
    return ck.dot((coeff.array() * rates.array()).matrix());
  };
  double peak = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const Vector coeff = numlin::solve(c.V, tr.states[i] - c.ss.x_ss).col(0);
    peak = std::max(peak, std::abs(slope(coeff, tr.modes[i])));
  }
  Vector coeff = numlin::solve(c.V, x0 - c.ss.x_ss).col(0);
  double jump = 0.0;
  for (std::size_t j = 0; j + 1 < sig.intervals(); ++j) {
    const Vector& rates = sig.modes[j] == 1 ? rates1 : rates2;
    coeff = (coeff.array() * (rates.array() * (sig.end(j) - sig.start(j))).exp()).matrix();
    jump = std::max(jump, std::abs(slope(coeff, sig.modes[j + 1]) - slope(coeff, sig.modes[j])));
  }
  return peak > 0 ? jump / peak : jump;
}

void write_csv(std::ostream& os, const Trajectory& tr) {
  if (tr.times.empty()) return;
  const Eigen::Index n = tr.states.front().size(), p = tr.r.size();
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
  for (Eigen::Index i = 1; i <= p; ++i) os << ",y" << i;
  for (Eigen::Index i = 1; i <= p; ++i) os << ",e" << i;
  os << ",mode\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    os << buf;
  };
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    put(tr.times[s]);
    for (Eigen::Index i = 0; i < n; ++i) os << ',', put(tr.states[s](i));
    for (Eigen::Index i = 0; i < p; ++i) os << ',', put(tr.outputs[s](i));
    for (Eigen::Index i = 0; i < p; ++i) os << ',', put(tr.errors[s](i));
    os << ',' << tr.modes[s] << '\n';
  }
}

}  // namespace swrect::simulate
