#include <cmath>
#include <numbers>
#include <sstream>

#include "heunpulse/errors.hpp"
#include "heunpulse/specfun.hpp"
#include "series_sum.hpp"

namespace heunpulse::specfun {

namespace {

bool is_nonpositive_integer(cplx x) {
  return x.imag() == 0.0 && x.real() <= 0.0 && x.real() == std::floor(x.real());
}

}  // namespace

SeriesResult hyp2f1(cplx a, cplx b, cplx c, cplx z, double tol) {
  if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a non-positive integer");
  if (!(tol > 0.0)) throw DomainError("hyp2f1: tol must be positive");
  if (std::abs(z) >= 1.0) {
    throw DomainError("hyp2f1: |z| >= 1 (use hyp2f1_at_one for z = 1)");
  }
  if (z == cplx(0.0)) {
    SeriesResult r;
    r.value = 1.0;
    r.derivative = a * b / c;
    r.second_derivative = a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0));
    r.terms_used = 1;
    r.converged = true;
    return r;
  }
  return detail::sum_power_series(
      z, 1.0, a * b / c * z, tol,
      [&](std::size_t j, cplx cur, cplx) {
        const double jd = static_cast<double>(j);
        return cur * z * (a + jd) * (b + jd) / ((jd + 1.0) * (c + jd));
      },
      "hyp2f1");
}

cplx hyp2f1_at_one(cplx a, cplx b, cplx c) {
  const cplx s = c - a - b;
  if (!(s.real() > 0.0)) {
    throw DivergenceError("hyp2f1_at_one: Re(c - a - b) <= 0, the series diverges at z = 1");
  }
  if (is_nonpositive_integer(c)) throw PoleError("hyp2f1_at_one: c is a non-positive integer");
  // Gamma poles in the denominator: the limit is zero.
  if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) return 0.0;
  return std::exp(log_gamma(c) + log_gamma(s) - log_gamma(c - a) - log_gamma(c - b));
}

std::vector<SeriesResult> hyp2f1_continue_many(cplx a, cplx b, cplx c,
                                               const std::vector<double>& targets,
                                               double tol) {
  if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a non-positive integer");
  // 2F1(a, b; c; z) = Hl[1, ab; a, b, c, a+b+1-c; z] with w = 0.
  const HeunParams hp(a, b, 1.0, a * b, c, a + b + 1.0 - c, 0.0);
  return heun_continue_many(hp, targets, tol);
}

std::vector<SeriesResult> hyp2f1_evaluate(cplx a, cplx b, cplx c,
                                          const std::vector<UnitPoint>& points, double tol) {
  if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a non-positive integer");
  const HeunParams hp(a, b, 1.0, a * b, c, a + b + 1.0 - c, 0.0);
  return heun_evaluate(hp, points, tol);
}

}  // namespace heunpulse::specfun
