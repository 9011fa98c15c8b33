#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "continuation.hpp"
#include "heunpulse/errors.hpp"
#include "heunpulse/specfun.hpp"
#include "series_sum.hpp"

namespace heunpulse::specfun {

namespace {

bool is_zero(cplx x) { return x == cplx(0.0, 0.0); }

// Coefficients of the three-term recursion at index j:
//   lead * s_{j+1} = mid * s_j - low * s_{j-1}.
struct HeunStep {
  cplx lead, mid, low;
};

HeunStep heun_step(const HeunParams& hp, double j) {
  const cplx c = hp.c(), u = hp.u();
  return {c * (j + 1.0) * (j + u),
          j * ((j - 1.0 + u) * (1.0 + c) + c * hp.v() + hp.w()) + hp.q(),
          (j - 1.0 + hp.a()) * (j - 1.0 + hp.b())};
}

void require_nondegenerate(const HeunParams& hp) {
  if (is_zero(hp.c())) {
    if (!is_zero(hp.q())) {
      throw DomainError("heun: c = 0 requires q = 0 (degenerate parameter set)");
    }
    // Gauss limit: lower parameter u + w must not be a non-positive integer.
    const cplx g = hp.u() + hp.w();
    if (g.imag() == 0.0 && g.real() <= 0.0 && g.real() == std::floor(g.real())) {
      throw PoleError("heun: u + w is a non-positive integer in the c = 0 limit");
    }
    return;
  }
  if (is_zero(hp.u())) throw DomainError("heun: u = 0 gives a division by zero");
  const cplx u = hp.u();
  if (u.imag() == 0.0 && u.real() < 0.0 && u.real() == std::floor(u.real())) {
    throw PoleError("heun: u is a negative integer; the exponent-0 branch is undefined");
  }
}

double radius(const HeunParams& hp) {
  return is_zero(hp.c()) ? 1.0 : std::min(1.0, std::abs(hp.c()));
}

}  // namespace

HeunParams::HeunParams(cplx a, cplx b, cplx c, cplx q, cplx u, cplx v, cplx w)
    : a_(a), b_(b), c_(c), q_(q), u_(u), v_(v), w_(w) {
  const cplx defect = u + v + w - a - b - 1.0;
  const double scale = std::max({1.0, std::abs(u), std::abs(v), std::abs(w), std::abs(a),
                                 std::abs(b)});
  if (std::abs(defect) > 1e-12 * scale) {
    std::ostringstream os;
    os << "HeunParams: Fuchs relation u+v+w = a+b+1 violated by " << std::abs(defect);
    throw DomainError(os.str());
  }
}

HeunParams HeunParams::with_fuchs_w(cplx a, cplx b, cplx c, cplx q, cplx u, cplx v) {
  return {a, b, c, q, u, v, a + b + 1.0 - u - v};
}

HeunParams HeunParams::second_branch() const {
  const cplx one_u = 1.0 - u_;
  const cplx q2 = q_ + one_u * ((c_ - 1.0) * v_ + a_ + b_ - u_ + 1.0);
  return {a_ + one_u, b_ + one_u, c_, q2, 2.0 - u_, v_, w_};
}

cplx HeunParams::p_coefficient(cplx z) const {
  if (is_zero(c_)) return (u_ + w_) / z + v_ / (z - 1.0);
  return u_ / z + v_ / (z - 1.0) + w_ / (z - c_);
}

cplx HeunParams::q_coefficient(cplx z) const {
  return (a_ * b_ * z - q_) / (z * (z - 1.0) * (z - c_));
}

CoefficientTable heun_coefficients(const HeunParams& params, std::size_t n) {
  require_nondegenerate(params);
  CoefficientTable t;
  t.s.resize(n + 1);
  t.s[0] = 1.0;
  if (n == 0) return t;

  if (is_zero(params.c())) {
    const cplx g = params.u() + params.w();
    for (std::size_t j = 1; j <= n; ++j) {
      const double jd = static_cast<double>(j);
      t.s[j] = t.s[j - 1] * (jd - 1.0 + params.a()) * (jd - 1.0 + params.b()) /
               (jd * (jd - 1.0 + g));
    }
    return t;
  }

  t.s[1] = params.q() / (params.u() * params.c());
  for (std::size_t j = 1; j < n; ++j) {
    const HeunStep st = heun_step(params, static_cast<double>(j));
    t.s[j + 1] = (st.mid * t.s[j] - st.low * t.s[j - 1]) / st.lead;
  }
  return t;
}

double heun_recursion_residual(const HeunParams& params, const CoefficientTable& table,
                               std::size_t j) {
  const auto& s = table.s;
  if (j + 1 >= s.size()) throw DomainError("heun_recursion_residual: index out of table");
  const cplx prev = j == 0 ? cplx(0.0) : s[j - 1];
  if (is_zero(params.c())) {
    // First-order relation of the Gauss limit between s_j and s_{j+1}.
    const double jd = static_cast<double>(j + 1);
    const cplx lhs = jd * (jd - 1.0 + params.u() + params.w()) * s[j + 1];
    const cplx rhs = (jd - 1.0 + params.a()) * (jd - 1.0 + params.b()) * s[j];
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
  }
  const HeunStep st = heun_step(params, static_cast<double>(j));
  const cplx t_low = st.low * prev;
  const cplx t_mid = st.mid * s[j];
  const cplx t_lead = st.lead * s[j + 1];
  const double scale =
      std::max({std::abs(t_low), std::abs(t_mid), std::abs(t_lead), 1e-300});
  return std::abs(t_low - t_mid + t_lead) / scale;
}

SeriesResult heun_local(const HeunParams& params, cplx z, double tol) {
  require_nondegenerate(params);
  if (!(tol > 0.0)) throw DomainError("heun_local: tol must be positive");
  const double rad = radius(params);
  if (std::abs(z) >= rad) {
    std::ostringstream os;
    os << "heun_local: |z| = " << std::abs(z) << " outside the convergence radius " << rad;
    throw DomainError(os.str());
  }

  if (is_zero(z)) {
    const CoefficientTable t = heun_coefficients(params, 2);
    SeriesResult r;
    r.value = 1.0;
    r.derivative = t.s[1];
    r.second_derivative = 2.0 * t.s[2];
    r.terms_used = 1;
    r.converged = true;
    return r;
  }

  if (is_zero(params.c())) {
    const cplx g = params.u() + params.w();
    const cplx a = params.a(), b = params.b();
    const cplx t1 = a * b / g * z;
    return detail::sum_power_series(
        z, 1.0, t1, tol,
        [&](std::size_t j, cplx cur, cplx) {
          const double jd = static_cast<double>(j);
          return cur * z * (jd + a) * (jd + b) / ((jd + 1.0) * (jd + g));
        },
        "heun_local");
  }

  const cplx t1 = params.q() / (params.u() * params.c()) * z;
  const cplx z2 = z * z;
  return detail::sum_power_series(
      z, 1.0, t1, tol,
      [&](std::size_t j, cplx cur, cplx prev) {
        const HeunStep st = heun_step(params, static_cast<double>(j));
        return (st.mid * z * cur - st.low * z2 * prev) / st.lead;
      },
      "heun_local");
}

std::vector<SeriesResult> heun_continue_many(const HeunParams& params,
                                             const std::vector<double>& targets,
                                             double tol) {
  require_nondegenerate(params);
  if (!(tol > 0.0)) throw DomainError("heun_continue: tol must be positive");
  const double upper = is_zero(params.c()) ? 1.0 : std::min(1.0, params.c().real());
  if (!is_zero(params.c()) && params.c().imag() != 0.0) {
    throw DomainError("heun_continue: only real c is supported");
  }
  for (double z : targets) {
    if (!(z > 0.0 && z < upper)) {
      std::ostringstream os;
      os << "heun_continue: target " << z << " outside (0, " << upper << ")";
      throw DomainError(os.str());
    }
  }
  constexpr double seed = 0.5;
  const SeriesResult s = heun_local(params, seed, 1e-16);
  return detail::march_linear_ode([&](cplx z) { return params.p_coefficient(z); },
                                  [&](cplx z) { return params.q_coefficient(z); }, seed,
                                  s.value, s.derivative, targets, tol);
}

SeriesResult heun_continue(const HeunParams& params, double z_target, double tol) {
  if (z_target == 1.0) z_target = 1.0 - 1e-8;
  return heun_continue_many(params, {z_target}, tol).front();
}

namespace {

using Local = std::function<SeriesResult(double)>;
using Expansion = detail::ExpansionAtOne<Local, Local>;

bool near_integer(cplx x) {
  return std::abs(x.imag()) < 1e-12 && std::abs(x.real() - std::round(x.real())) < 1e-12;
}

cplx heun_rho(const HeunParams& hp) {
  cplx v_total = hp.v();
  if (hp.c() == cplx(1.0, 0.0)) v_total += hp.w();
  return 1.0 - v_total;
}

// Heun equation in t = 1 - z: c -> 1 - c, q -> ab - q, u <-> v.
std::optional<Expansion> heun_expansion_at_one(const HeunParams& hp, double tol) {
  const cplx rho = heun_rho(hp);
  if (near_integer(rho)) return std::nullopt;
  const cplx c1 = 1.0 - hp.c();
  const cplx q1 = hp.a() * hp.b() - hp.q();
  if (is_zero(c1) && !is_zero(q1)) return std::nullopt;
  const HeunParams flip(hp.a(), hp.b(), c1, q1, hp.v(), hp.u(), hp.w());
  HeunParams second = flip;
  double radius = 1.0;
  if (is_zero(c1)) {
    // Gauss limit: exponents 0 and 1 - (u + w) at t = 0.
    const cplx cc = flip.u() + flip.w();
    second = HeunParams(flip.a() + 1.0 - cc, flip.b() + 1.0 - cc, 0.0, 0.0, 2.0 - cc, flip.v(),
                        0.0);
  } else {
    second = flip.second_branch();
    radius = std::min(1.0, std::abs(c1));
  }
  return Expansion{[flip, tol](double t) { return heun_local(flip, t, tol); },
                   [second, tol](double t) { return heun_local(second, t, tol); }, rho, radius};
}

std::optional<Expansion> confluent_expansion_at_one(const ConfluentHeunParams& cp, double tol) {
  const cplx rho = 1.0 - cp.v;
  if (near_integer(rho)) return std::nullopt;
  // In t = 1 - z: u <-> v, p -> -p, q -> p + q.
  const ConfluentHeunParams flip{cp.v, cp.u, -cp.p, cp.p + cp.q};
  const ConfluentHeunParams second = flip.second_branch();
  return Expansion{[flip, tol](double t) { return confluent_heun_local(flip, t, tol); },
                   [second, tol](double t) { return confluent_heun_local(second, t, tol); },
                   rho, 1.0};
}

void require_real_c(const HeunParams& hp) {
  const cplx c = hp.c();
  if (is_zero(c)) return;
  if (c.imag() != 0.0 || c.real() < 1.0) {
    throw DomainError("heun_evaluate: needs c = 0 or real c >= 1");
  }
}

}  // namespace

namespace {

cplx strip_singular_term(const SeriesResult& r, double eps, cplx rho) {
  // y = A + B t^rho + O(t), t = 1 - z  =>  A = y + t y'(z) / rho + O(t).
  return r.value + eps * r.derivative / rho;
}

}  // namespace

cplx heun_limit_at_one(const HeunParams& params, double eps, double tol) {
  // Exponent of the singular branch at z = 1; for c = 1 the w term merges in.
  cplx v_total = params.v();
  if (params.c() == cplx(1.0, 0.0)) v_total += params.w();
  const cplx rho = 1.0 - v_total;
  if (rho.real() <= 0.0) {
    throw DivergenceError("heun_limit_at_one: Re(1 - v) <= 0, no finite limit at z = 1");
  }
  if (const auto ex = heun_expansion_at_one(params, 1e-16)) {
    const double t = 0.5 * std::min(1.0, ex->radius);
    const SeriesResult r = heun_continue_many(params, {1.0 - t}, tol).front();
    return detail::match_at_one(*ex, t, r).a;
  }
  const SeriesResult r = heun_continue_many(params, {1.0 - eps}, tol).front();
  return strip_singular_term(r, eps, rho);
}

// --- confluent Heun -------------------------------------------------------

CoefficientTable confluent_heun_coefficients(const ConfluentHeunParams& cp, std::size_t n) {
  if (is_zero(cp.u)) throw DomainError("confluent_heun: u = 0 gives a division by zero");
  CoefficientTable t;
  t.s.resize(n + 1);
  t.s[0] = 1.0;
  if (n == 0) return t;
  t.s[1] = cp.q / cp.u;
  for (std::size_t j = 1; j < n; ++j) {
    const double jd = static_cast<double>(j);
    t.s[j + 1] = ((jd * (jd - 1.0 + cp.u + cp.v) + cp.q) * t.s[j] + cp.p * t.s[j - 1]) /
                 ((jd + 1.0) * (jd + cp.u));
  }
  return t;
}

SeriesResult confluent_heun_local(const ConfluentHeunParams& cp, cplx z, double tol) {
  if (is_zero(cp.u)) throw DomainError("confluent_heun: u = 0 gives a division by zero");
  if (cp.u.imag() == 0.0 && cp.u.real() < 0.0 && cp.u.real() == std::floor(cp.u.real())) {
    throw PoleError("confluent_heun: u is a negative integer");
  }
  if (!(tol > 0.0)) throw DomainError("confluent_heun_local: tol must be positive");
  if (std::abs(z) >= 1.0) {
    throw DomainError("confluent_heun_local: |z| must be < 1");
  }
  if (is_zero(z)) {
    const CoefficientTable t = confluent_heun_coefficients(cp, 2);
    SeriesResult r;
    r.value = 1.0;
    r.derivative = t.s[1];
    r.second_derivative = 2.0 * t.s[2];
    r.terms_used = 1;
    r.converged = true;
    return r;
  }
  const cplx z2 = z * z;
  return detail::sum_power_series(
      z, 1.0, cp.q / cp.u * z, tol,
      [&](std::size_t j, cplx cur, cplx prev) {
        const double jd = static_cast<double>(j);
        return ((jd * (jd - 1.0 + cp.u + cp.v) + cp.q) * z * cur + cp.p * z2 * prev) /
               ((jd + 1.0) * (jd + cp.u));
      },
      "confluent_heun_local");
}

std::vector<SeriesResult> confluent_heun_continue_many(const ConfluentHeunParams& cp,
                                                       const std::vector<double>& targets,
                                                       double tol) {
  for (double z : targets) {
    if (!(z > 0.0 && z < 1.0)) {
      throw DomainError("confluent_heun_continue: targets must lie in (0, 1)");
    }
  }
  constexpr double seed = 0.5;
  const SeriesResult s = confluent_heun_local(cp, seed, 1e-16);
  return detail::march_linear_ode([&](cplx z) { return cp.p_coefficient(z); },
                                  [&](cplx z) { return cp.q_coefficient(z); }, seed,
                                  s.value, s.derivative, targets, tol);
}

cplx confluent_heun_limit_at_one(const ConfluentHeunParams& cp, double eps, double tol) {
  const cplx rho = 1.0 - cp.v;
  if (rho.real() <= 0.0) {
    throw DivergenceError(
        "confluent_heun_limit_at_one: Re(1 - v) <= 0, no finite limit at z = 1");
  }
  if (const auto ex = confluent_expansion_at_one(cp, 1e-16)) {
    const SeriesResult r = confluent_heun_continue_many(cp, {0.5}, tol).front();
    return detail::match_at_one(*ex, 0.5, r).a;
  }
  const SeriesResult r = confluent_heun_continue_many(cp, {1.0 - eps}, tol).front();
  return strip_singular_term(r, eps, rho);
}


// --- evaluation up to z = 1 -----------------------------------------------


std::vector<SeriesResult> heun_evaluate(const HeunParams& params,
                                        const std::vector<UnitPoint>& points, double tol) {
  require_nondegenerate(params);
  require_real_c(params);
  const auto ex = heun_expansion_at_one(params, 1e-16);
  const Expansion* exp = ex ? &*ex : nullptr;
  return detail::evaluate_unit_interval(
      points, [&](double z) { return heun_local(params, z, 1e-16); },
      [&](const std::vector<double>& zs) { return heun_continue_many(params, zs, tol); }, exp);
}

std::vector<SeriesResult> confluent_heun_evaluate(const ConfluentHeunParams& params,
                                                  const std::vector<UnitPoint>& points,
                                                  double tol) {
  const auto ex = confluent_expansion_at_one(params, 1e-16);
  const Expansion* exp = ex ? &*ex : nullptr;
  return detail::evaluate_unit_interval(
      points, [&](double z) { return confluent_heun_local(params, z, 1e-16); },
      [&](const std::vector<double>& zs) {
        return confluent_heun_continue_many(params, zs, tol);
      },
      exp);
}

}  // namespace heunpulse::specfun
