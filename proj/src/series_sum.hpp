#pragma once

// Shared power-series driver for the Frobenius-type expansions in specfun.

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include "heunpulse/errors.hpp"
#include "heunpulse/specfun.hpp"

namespace heunpulse::specfun::detail {

/// Sums sum_j t_j where t_j = s_j z^j is produced term by term by
/// `next(j, t_j, t_{j-1})` returning t_{j+1}. Also accumulates the first and
/// second z-derivatives. Stops once two consecutive terms of both the value and
/// derivative series are below tol relative to their partial sums.
template <class Next>
SeriesResult sum_power_series(cplx z, cplx t0, cplx t1, double tol, Next&& next,
                              const char* name) {
  SeriesResult r;
  const double tiny = std::numeric_limits<double>::min();

  if (z == cplx(0.0, 0.0)) {
    // s1 = t1/z is not available from the terms; callers pass z != 0 or use
    // their coefficient tables.
    r.value = t0;
    r.converged = true;
    r.terms_used = 1;
    return r;
  }

  cplx sum = t0 + t1;
  cplx dsum = t1 / z;
  cplx d2sum = 0.0;
  cplx prev = t0;
  cplx cur = t1;
  int quiet = 0;
  double last_rel = 0.0;
  double prev_rel = std::abs(t0) / std::max(std::abs(sum), tiny);

  for (std::size_t j = 1; j < kMaxSeriesTerms; ++j) {
    const cplx nxt = next(j, cur, prev);
    prev = cur;
    cur = nxt;
    const double jj = static_cast<double>(j + 1);
    sum += cur;
    const cplx dterm = jj * cur / z;
    dsum += dterm;
    const cplx d2term = jj * (jj - 1.0) * cur / (z * z);
    d2sum += d2term;

    if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
      throw ConvergenceError(std::string(name) + ": series overflow",
                             std::numeric_limits<double>::infinity());
    }

    const double rel = std::abs(cur) / std::max(std::abs(sum), tiny);
    const double drel = std::abs(dterm) / std::max(std::abs(dsum), tiny);
    const bool small = rel < tol && drel < tol;
    quiet = small ? quiet + 1 : 0;
    prev_rel = last_rel;
    last_rel = rel;
    if (quiet >= 2) {
      r.value = sum;
      r.derivative = dsum;
      r.second_derivative = d2sum;
      r.terms_used = j + 2;
      r.tail_estimate = std::max(rel, prev_rel);
      r.converged = true;
      return r;
    }
  }
  std::ostringstream os;
  os << name << ": no convergence within " << kMaxSeriesTerms << " terms (tail "
     << std::max(last_rel, prev_rel) << ")";
  throw ConvergenceError(os.str(), std::max(last_rel, prev_rel));
}

}  // namespace heunpulse::specfun::detail
