#pragma once

// Real-axis continuation of y'' + P(z) y' + Q(z) y = 0 from a seed point.

#include <algorithm>
#include <cmath>
#include <vector>

#include "heunpulse/errors.hpp"
#include "heunpulse/ode.hpp"
#include "heunpulse/specfun.hpp"

namespace heunpulse::specfun::detail {

template <class Pc, class Qc>
std::vector<SeriesResult> march_linear_ode(Pc&& p_coef, Qc&& q_coef, double z0, cplx y0,
                                           cplx dy0, const std::vector<double>& targets,
                                           double tol) {
  std::vector<SeriesResult> out(targets.size());
  if (targets.empty()) return out;
  if (!std::is_sorted(targets.begin(), targets.end())) {
    throw DomainError("continuation targets must be sorted ascending");
  }

  auto rhs = [&](double z, const ode::State<2>& s) {
    const cplx zc(z, 0.0);
    return ode::State<2>{s[1], -p_coef(zc) * s[1] - q_coef(zc) * s[0]};
  };

  ode::Tolerances cfg;
  cfg.rel_tol = tol;
  cfg.abs_tol = tol * 1e-3;
  cfg.min_step = 1e-12 * 1e-3;

  // Split into the backward (below z0) and forward (at or above z0) legs.
  const auto split = std::lower_bound(targets.begin(), targets.end(), z0);
  const std::size_t n_back = static_cast<std::size_t>(split - targets.begin());

  auto record = [&](std::size_t idx) {
    return [&, idx](double z, const ode::State<2>& s, const ode::State<2>& ds) mutable {
      (void)z;
      SeriesResult& r = out[idx];
      r.value = s[0];
      r.derivative = s[1];
      r.second_derivative = ds[1];
      r.converged = true;
      r.tail_estimate = tol;
      ++idx;
    };
  };

  try {
    if (n_back > 0) {
      std::vector<double> back(targets.begin(), split);
      std::reverse(back.begin(), back.end());
      // Reversed order: fill indices downward.
      std::size_t idx = n_back;
      ode::integrate<2>(rhs, z0, ode::State<2>{y0, dy0}, back, cfg,
                        [&](double, const ode::State<2>& s, const ode::State<2>& ds) {
                          SeriesResult& r = out[--idx];
                          r.value = s[0];
                          r.derivative = s[1];
                          r.second_derivative = ds[1];
                          r.converged = true;
                          r.tail_estimate = tol;
                        });
    }
    if (n_back < targets.size()) {
      std::vector<double> fwd(split, targets.end());
      ode::integrate<2>(rhs, z0, ode::State<2>{y0, dy0}, fwd, cfg, record(n_back));
    }
  } catch (const IntegrationError& e) {
    throw IntegrationError(std::string("continuation failed: ") + e.what(), e.reached());
  }
  return out;
}

}  // namespace heunpulse::specfun::detail

namespace heunpulse::specfun::detail {

/// Local solutions about z = 1 in t = 1 - z: a regular one F1(t) with F1(0) = 1
/// and a singular one t^rho F2(t).
template <class Regular, class Singular>
struct ExpansionAtOne {
  Regular regular;    // t -> SeriesResult (derivatives in t)
  Singular singular;  // t -> SeriesResult of F2
  cplx rho;
  double radius;
};

struct MatchedPair {
  cplx a, b;  // y = a F1 + b t^rho F2
};

template <class Ex>
MatchedPair match_at_one(const Ex& ex, double t, const SeriesResult& y) {
  const SeriesResult f1 = ex.regular(t);
  const SeriesResult f2 = ex.singular(t);
  const cplx tr = std::exp(ex.rho * std::log(t));
  const cplx g = tr * f2.value;
  const cplx gt = tr * (ex.rho / t * f2.value + f2.derivative);
  const cplx yt = -y.derivative;
  const cplx det = f1.value * gt - f1.derivative * g;
  if (std::abs(det) == 0.0) throw ConvergenceError("singular matching at z = 1", 0.0);
  return {(y.value * gt - yt * g) / det, (f1.value * yt - f1.derivative * y.value) / det};
}

template <class Ex>
SeriesResult evaluate_near_one(const Ex& ex, const MatchedPair& m, double t) {
  const SeriesResult f1 = ex.regular(t);
  const SeriesResult f2 = ex.singular(t);
  const cplx tr = std::exp(ex.rho * std::log(t));
  const cplx rho = ex.rho;
  const cplx g = tr * f2.value;
  const cplx gt = tr * (rho / t * f2.value + f2.derivative);
  const cplx gtt = tr * (rho * (rho - 1.0) / (t * t) * f2.value +
                         2.0 * rho / t * f2.derivative + f2.second_derivative);
  SeriesResult r;
  r.value = m.a * f1.value + m.b * g;
  r.derivative = -(m.a * f1.derivative + m.b * gt);
  r.second_derivative = m.a * f1.second_derivative + m.b * gtt;
  r.terms_used = f1.terms_used + f2.terms_used;
  r.tail_estimate = std::max(f1.tail_estimate, f2.tail_estimate);
  r.converged = f1.converged && f2.converged;
  return r;
}

/// Evaluates a solution on (0, 1) from its series at 0 (radius r0 >= 1/2
/// assumed), real-axis continuation, and, when `ex` is given, the local pair
/// at z = 1 matched to the continued solution.
template <class Local0, class Cont, class Ex>
std::vector<SeriesResult> evaluate_unit_interval(const std::vector<UnitPoint>& pts,
                                                 Local0&& local0, Cont&& cont, const Ex* ex) {
  constexpr double series_edge = 0.5;
  const double t_edge = ex ? 0.5 * std::min(1.0, ex->radius) : 0.0;

  std::vector<SeriesResult> out(pts.size());
  std::vector<std::pair<double, std::size_t>> mid;
  bool need_one = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const UnitPoint& p = pts[i];
    if (!(p.z > 0.0 && p.complement > 0.0)) {
      throw DomainError("evaluation points must lie in (0, 1)");
    }
    if (p.z <= series_edge) {
      out[i] = local0(p.z);
    } else if (ex && p.complement <= t_edge) {
      need_one = true;
    } else {
      mid.emplace_back(p.z, i);
    }
  }
  std::sort(mid.begin(), mid.end());
  std::vector<double> zs;
  for (const auto& m : mid) zs.push_back(m.first);
  const double z_match = 1.0 - t_edge;
  if (need_one) zs.push_back(z_match);
  std::vector<double> sorted = zs;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SeriesResult> vals;
  if (!sorted.empty()) vals = cont(sorted);
  auto lookup = [&](double z) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), z);
    return vals[static_cast<std::size_t>(it - sorted.begin())];
  };
  for (const auto& m : mid) out[m.second] = lookup(m.first);
  if (need_one) {
    const MatchedPair pair = match_at_one(*ex, t_edge, lookup(z_match));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].z > series_edge && pts[i].complement <= t_edge) {
        out[i] = evaluate_near_one(*ex, pair, pts[i].complement);
      }
    }
  }
  return out;
}

}  // namespace heunpulse::specfun::detail
