#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small complex systems.
//
// Output abscissae are hit exactly (the step is clipped to land on them), so
// samples carry the full step accuracy with no interpolation error.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>

#include "heunpulse/errors.hpp"

namespace heunpulse::ode {

template <std::size_t N>
using State = std::array<std::complex<double>, N>;

struct Tolerances {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 2'000'000;
  /// Absolute floor on |h|; reaching it aborts with IntegrationError.
  double min_step = 1e-14;
  /// Optional cap on |h| (0 = none).
  double max_step = 0.0;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h,
              std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [coef, k] : terms) {
    if (coef == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += (h * coef) * (*k)[i];
  }
  return out;
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from (t0, y0) through every abscissa in
/// `outputs` (monotone, in the direction of travel), calling
/// `observer(t, y, dy)` at each. The direction may be backward.
template <std::size_t N, class Rhs, class Observer>
Stats integrate(Rhs&& rhs, double t0, State<N> y0, std::span<const double> outputs,
                const Tolerances& tol, Observer&& observer) {
  Stats stats;
  if (outputs.empty()) return stats;

  const double t_end = outputs.back();
  const double dir = t_end >= t0 ? 1.0 : -1.0;

  // Dormand-Prince tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = t0;
  State<N> y = y0;
  State<N> k1 = rhs(t, y);
  ++stats.evaluations;

  std::size_t next = 0;
  while (next < outputs.size() && outputs[next] * dir <= t * dir) {
    observer(outputs[next], y, k1);
    ++next;
  }
  if (next == outputs.size()) return stats;

  // Initial step from the usual two-norm heuristic.
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = tol.abs_tol + tol.rel_tol * std::abs(y[i]);
      d0 += std::norm(y[i]) / (sc * sc);
      d1 += std::norm(k1[i]) / (sc * sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, std::abs(t_end - t0));
    if (tol.max_step > 0) h = std::min(h, tol.max_step);
  }

  double err_prev = 1e-4;
  bool rejected_last = false;

  while (next < outputs.size()) {
    if (stats.accepted + stats.rejected >= tol.max_steps) {
      std::ostringstream os;
      os << "integrator exceeded max_steps=" << tol.max_steps << " at t=" << t;
      throw IntegrationError(os.str(), t);
    }
    if (h < tol.min_step) {
      std::ostringstream os;
      os << "integrator step underflow (h=" << h << ") at t=" << t;
      throw IntegrationError(os.str(), t);
    }

    const double target = outputs[next];
    double h_step = h;
    bool clipped = false;
    if ((t + dir * h_step - target) * dir >= 0.0) {
      h_step = std::abs(target - t);
      clipped = true;
    }
    const double hs = dir * h_step;

    const State<N> y2 = detail::axpy<N>(y, hs, {{a21, &k1}});
    const State<N> k2 = rhs(t + c2 * hs, y2);
    const State<N> y3 = detail::axpy<N>(y, hs, {{a31, &k1}, {a32, &k2}});
    const State<N> k3 = rhs(t + c3 * hs, y3);
    const State<N> y4 = detail::axpy<N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const State<N> k4 = rhs(t + c4 * hs, y4);
    const State<N> y5 =
        detail::axpy<N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const State<N> k5 = rhs(t + c5 * hs, y5);
    const State<N> y6 = detail::axpy<N>(
        y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const double t_new = clipped ? target : t + hs;
    const State<N> k6 = rhs(t + hs, y6);
    const State<N> y_new = detail::axpy<N>(
        y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State<N> k7 = rhs(t_new, y_new);
    stats.evaluations += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const std::complex<double> e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                           e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += std::norm(e) / (sc * sc);
    }
    err = std::sqrt(err / N);
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      ++stats.accepted;
      t = t_new;
      y = y_new;
      k1 = k7;
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) *
                   std::pow(err_prev, 0.4 / 5);
      fac = std::clamp(fac, 0.2, 5.0);
      if (rejected_last) fac = std::min(fac, 1.0);
      const double proposed = h_step * fac;
      h = clipped ? std::max(proposed, h) : proposed;
      if (tol.max_step > 0) h = std::min(h, tol.max_step);
      err_prev = std::max(err, 1e-4);
      rejected_last = false;
      while (next < outputs.size() && outputs[next] * dir <= t * dir) {
        observer(outputs[next], y, k1);
        ++next;
      }
    } else {
      ++stats.rejected;
      const double fac = std::max(0.2, 0.9 * std::pow(err, -1.0 / 5));
      h = h_step * fac;
      rejected_last = true;
    }
  }
  return stats;
}

}  // namespace heunpulse::ode
