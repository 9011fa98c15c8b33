#pragma once

// Special functions used by the exact two-level solutions: Heun local
// solutions, the non-symmetrical confluent Heun equation, Gauss 2F1,
// complex log-gamma and Bessel J0/J1.
//
// All functions are pure; safe to call concurrently.

#include <complex>
#include <cstddef>
#include <vector>

namespace heunpulse::specfun {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxSeriesTerms = 100'000;

/// Parameters of
///   y'' + (u/z + v/(z-1) + w/(z-c)) y' + (ab z - q) / (z (z-1)(z-c)) y = 0
/// with the Fuchs relation u + v + w = a + b + 1.
class HeunParams {
 public:
  /// Throws DomainError unless |u + v + w - a - b - 1| <= 1e-12 (scaled).
  HeunParams(cplx a, cplx b, cplx c, cplx q, cplx u, cplx v, cplx w);

  /// Builds the parameter set with w fixed by the Fuchs relation.
  static HeunParams with_fuchs_w(cplx a, cplx b, cplx c, cplx q, cplx u, cplx v);

  cplx a() const { return a_; }
  cplx b() const { return b_; }
  cplx c() const { return c_; }
  cplx q() const { return q_; }
  cplx u() const { return u_; }
  cplx v() const { return v_; }
  cplx w() const { return w_; }

  /// Exchange of a and b (the local solution is invariant under it).
  HeunParams swapped_ab() const { return {b_, a_, c_, q_, u_, v_, w_}; }

  /// Parameters of the companion local solution z^(1-u) Hl[...] about z = 0.
  HeunParams second_branch() const;

  /// y'' coefficient functions evaluated at z.
  cplx p_coefficient(cplx z) const;
  cplx q_coefficient(cplx z) const;

 private:
  cplx a_, b_, c_, q_, u_, v_, w_;
};

/// Parameters of
///   y'' + (u/z + v/(z-1)) y' + (p z + q) / (z (z-1)) y = 0.
struct ConfluentHeunParams {
  cplx u;
  cplx v;
  cplx p;
  cplx q;

  /// Companion branch z^(1-u) y(z): y solves the same family with
  /// (2-u, v, p, q + (1-u) v).
  ConfluentHeunParams second_branch() const { return {2.0 - u, v, p, q + (1.0 - u) * v}; }

  cplx p_coefficient(cplx z) const { return u / z + v / (z - 1.0); }
  cplx q_coefficient(cplx z) const { return (p * z + q) / (z * (z - 1.0)); }

  /// Parameters of the Maple-convention HeunC(0, beta, gamma, delta, eta; z),
  /// whose equation has u = beta + 1, v = gamma + 1, p = delta and
  /// q = ((gamma + 1) beta + 2 eta + gamma) / 2.
  static ConfluentHeunParams from_maple(cplx beta, cplx gamma, cplx delta, cplx eta) {
    return {beta + 1.0, gamma + 1.0, delta, ((gamma + 1.0) * beta + 2.0 * eta + gamma) / 2.0};
  }
};

struct SeriesResult {
  cplx value;
  /// d/dz of the series.
  cplx derivative;
  cplx second_derivative;
  std::size_t terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;
};

struct CoefficientTable {
  std::vector<cplx> s;
};

/// Power-series coefficients s_0..s_n of Hl about z = 0 from the three-term
/// recursion
///   c (j+1)(j+u) s_{j+1} = [j((j-1+u)(1+c) + c v + w) + q] s_j
///                          - (j-1+a)(j-1+b) s_{j-1}.
/// For c = 0 (only with q = 0) the equation collapses to the Gauss one and the
/// first-order recurrence of that limit is used instead.
CoefficientTable heun_coefficients(const HeunParams& params, std::size_t n);

/// Residual of the recursion at index j, relative to the largest term.
double heun_recursion_residual(const HeunParams& params, const CoefficientTable& table,
                               std::size_t j);

/// Local solution Hl about z = 0, normalized Hl(0) = 1. Requires
/// |z| < min(1, |c|) (|z| < 1 in the c = 0 limit).
SeriesResult heun_local(const HeunParams& params, cplx z, double tol = 1e-15);

/// Continues the Hl branch along the real axis: seeds (value, derivative) from
/// the series at z = 0.5 and marches the Heun ODE to z_target. z_target == 1
/// is replaced by the proxy 1 - 1e-8.
SeriesResult heun_continue(const HeunParams& params, double z_target, double tol = 1e-12);

/// Batch form of heun_continue; `targets` must be sorted ascending, each in
/// (0, min(1, c)).
std::vector<SeriesResult> heun_continue_many(const HeunParams& params,
                                             const std::vector<double>& targets,
                                             double tol = 1e-12);

/// A point of (0, 1) with its complement 1 - z carried separately, so points
/// close to z = 1 keep full relative accuracy.
struct UnitPoint {
  double z;
  double complement;
};

/// Hl at arbitrary points of (0, 1). Near z = 1 the solution is written as
/// A F1(t) + B t^rho F2(t), t = 1 - z, with A and B matched to the continued
/// branch, so no accuracy is lost as t -> 0. Derivatives are in z.
std::vector<SeriesResult> heun_evaluate(const HeunParams& params,
                                        const std::vector<UnitPoint>& points,
                                        double tol = 1e-13);

/// Limit of Hl as z -> 1 from below (the coefficient A above). Requires
/// Re(rho) > 0, rho = 1 - v (1 - v - w when c = 1). When the local pair at
/// z = 1 is degenerate (integer rho, or c = 1 with ab != q) the branch is
/// marched to 1 - eps and the leading singular term is stripped, exact up
/// to O(eps).
cplx heun_limit_at_one(const HeunParams& params, double eps = 1e-10, double tol = 1e-13);

/// Frobenius series about z = 0 (exponent 0, normalized to 1) of the confluent
/// Heun equation, from
///   (j+1)(j+u) s_{j+1} = [j(j-1+u+v) + q] s_j + p s_{j-1}.
SeriesResult confluent_heun_local(const ConfluentHeunParams& params, cplx z,
                                  double tol = 1e-15);

CoefficientTable confluent_heun_coefficients(const ConfluentHeunParams& params, std::size_t n);

std::vector<SeriesResult> confluent_heun_continue_many(const ConfluentHeunParams& params,
                                                       const std::vector<double>& targets,
                                                       double tol = 1e-12);

cplx confluent_heun_limit_at_one(const ConfluentHeunParams& params, double eps = 1e-10,
                                 double tol = 1e-13);

std::vector<SeriesResult> confluent_heun_evaluate(const ConfluentHeunParams& params,
                                                  const std::vector<UnitPoint>& points,
                                                  double tol = 1e-13);

/// Gauss series 2F1(a, b; c; z) for |z| < 1.
SeriesResult hyp2f1(cplx a, cplx b, cplx c, cplx z, double tol = 1e-15);

/// 2F1 at z = 1 by the Gauss summation formula; needs Re(c - a - b) > 0.
cplx hyp2f1_at_one(cplx a, cplx b, cplx c);

/// Continues 2F1(a, b; c; .) along the real axis beyond the comfortable series
/// range (targets ascending in (0, 1)).
std::vector<SeriesResult> hyp2f1_continue_many(cplx a, cplx b, cplx c,
                                               const std::vector<double>& targets,
                                               double tol = 1e-12);

/// 2F1(a, b; c; .) at arbitrary points of (0, 1), see heun_evaluate.
std::vector<SeriesResult> hyp2f1_evaluate(cplx a, cplx b, cplx c,
                                          const std::vector<UnitPoint>& points,
                                          double tol = 1e-13);

/// Principal branch of log Gamma(z).
cplx log_gamma(cplx z);

/// J0 (order 0) or J1 (order 1) for x >= 0.
double bessel_j(int order, double x);

/// J1(x) / x, finite at x = 0.
double bessel_j1_over_x(double x);

}  // namespace heunpulse::specfun
