#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "heunpulse/errors.hpp"
#include "heunpulse/ode.hpp"
#include "heunpulse/pulses.hpp"
#include "heunpulse/specfun.hpp"

using namespace heunpulse;
using namespace heunpulse::specfun;

namespace {

constexpr cplx kI(0.0, 1.0);

double rel(cplx x, cplx y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); }

cplx draw(std::mt19937& rng, double r) {
  std::uniform_real_distribution<double> d(-r, r);
  return {d(rng), d(rng)};
}

// Away from the poles at non-positive integers.
bool safe_lower(cplx x) {
  return !(std::abs(x.imag()) < 0.25 && x.real() < 0.3 &&
           std::abs(x.real() - std::round(x.real())) < 0.25);
}

HeunParams omega_delta_params() {
  // beta = 2.5, gamma = 0.25, delta = 2.
  return HeunParams(0.0, 0.5, 1.5, -0.03125, 0.5 - 1.25 * kI, 0.5 + 1.25 * kI, 0.5);
}

}  // namespace

TEST_CASE("HeunParams enforces the Fuchs relation") {
  CHECK_THROWS_AS(HeunParams(0.0, 0.5, 2.0, 0.0, 0.5, 0.5, 0.6), DomainError);
  const HeunParams h = HeunParams::with_fuchs_w(0.3, 0.7, 2.0, 0.1, 0.4, 0.9);
  CHECK(std::abs(h.u() + h.v() + h.w() - h.a() - h.b() - 1.0) == doctest::Approx(0.0));
}

TEST_CASE("heun_coefficients: initial terms and zero drive") {
  const HeunParams h = omega_delta_params();
  const CoefficientTable t = heun_coefficients(h, 5);
  CHECK(t.s[0] == cplx(1.0));
  const cplx s1 = -0.03125 / (1.5 * (0.5 - 1.25 * kI));
  CHECK(std::abs(t.s[1] - s1) < 1e-15);

  const HeunParams flat(0.0, 0.5, 2.0, 0.0, 0.5, 0.5, 0.5);
  const CoefficientTable z = heun_coefficients(flat, 20);
  for (std::size_t j = 1; j <= 20; ++j) CHECK(z.s[j] == cplx(0.0));
}

TEST_CASE("heun_coefficients: degenerate parameters are rejected") {
  CHECK_THROWS_AS(heun_coefficients(HeunParams(0.0, 0.5, 2.0, 0.1, 0.0, 1.0, 0.5), 4),
                  DomainError);
  CHECK_THROWS_AS(heun_coefficients(HeunParams(0.0, 0.5, 0.0, 0.1, 0.5, 0.5, 0.5), 4),
                  DomainError);
}

TEST_CASE("heun recursion residual holds for random parameters") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> cm(1.2, 4.0);
  for (int k = 0; k < 40; ++k) {
    const cplx a = draw(rng, 2.0), b = draw(rng, 2.0), u = draw(rng, 2.0) + 2.5;
    const cplx v = draw(rng, 2.0), q = draw(rng, 2.0);
    const HeunParams h = HeunParams::with_fuchs_w(a, b, cm(rng), q, u, v);
    const CoefficientTable t = heun_coefficients(h, 51);
    for (std::size_t j = 1; j <= 50; ++j) CHECK(heun_recursion_residual(h, t, j) < 1e-12);
  }
}

TEST_CASE("heun_local: origin, symmetry and the c = 1 reduction") {
  const HeunParams h = omega_delta_params();
  CHECK(heun_local(h, 0.0).value == cplx(1.0));

  const cplx z(0.3, -0.1);
  const SeriesResult r1 = heun_local(h, z);
  const SeriesResult r2 = heun_local(h.swapped_ab(), z);
  CHECK(std::abs(r1.value - r2.value) < 1e-14);
  CHECK(r1.converged);

  const cplx a(0.3, 0.2), b(-0.4, 0.1), u(1.2, -0.5), v(0.7, 0.3);
  const HeunParams g(a, b, 1.0, a * b, u, v, a + b + 1.0 - u - v);
  CHECK(rel(heun_local(g, 0.3).value, hyp2f1(a, b, u, 0.3).value) < 1e-13);
  CHECK(rel(heun_local(g, 0.25).value, hyp2f1(a, b, u, 0.25).value) < 1e-13);
}

TEST_CASE("heun_local: radius and ODE residual") {
  const HeunParams h = omega_delta_params();
  CHECK_THROWS_AS(heun_local(h, 1.0), DomainError);

  std::mt19937 rng(5);
  for (int k = 0; k < 30; ++k) {
    const cplx z = std::polar(0.7 * std::uniform_real_distribution<double>(0, 1)(rng),
                              std::uniform_real_distribution<double>(-3, 3)(rng));
    if (std::abs(z) < 1e-3) continue;
    const SeriesResult r = heun_local(h, z);
    const cplx lhs = r.second_derivative + h.p_coefficient(z) * r.derivative +
                     h.q_coefficient(z) * r.value;
    const double scale = std::abs(r.second_derivative) +
                         std::abs(h.p_coefficient(z) * r.derivative) +
                         std::abs(h.q_coefficient(z) * r.value);
    CHECK(std::abs(lhs) / scale < 1e-8);
  }
}

TEST_CASE("degeneracy reductions to 2F1 over random draws") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> rad(0.0, 0.5), ang(-3.14159, 3.14159), cm(1.5, 3.0);
  int draws = 0;
  double worst = 0.0;
  while (draws < 60) {
    const cplx a = draw(rng, 2.0), b = draw(rng, 2.0), u = draw(rng, 2.0), v = draw(rng, 2.0);
    const cplx gauss_c = a + b - v + 1.0;
    if (!safe_lower(u) || !safe_lower(gauss_c)) continue;
    ++draws;
    const cplx c = std::polar(cm(rng), ang(rng));
    const cplx z = std::polar(rad(rng), ang(rng));
    const cplx f = hyp2f1(a, b, u, z).value;
    worst = std::max(worst, rel(heun_local(HeunParams(a, b, 1.0, a * b, u, v,
                                                      a + b + 1.0 - u - v), z).value, f));
    worst = std::max(worst, rel(heun_local(HeunParams(a, b, c, c * a * b, u,
                                                      a + b - u + 1.0, 0.0), z).value, f));
    worst = std::max(worst, rel(heun_local(HeunParams(a, b, 0.0, 0.0, u, v,
                                                      a + b + 1.0 - u - v), z).value,
                                hyp2f1(a, b, gauss_c, z).value));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("heun_continue agrees with the series and with 2F1 near 1") {
  const HeunParams h = omega_delta_params();
  CHECK(rel(heun_continue(h, 0.4).value, heun_local(h, 0.4).value) < 1e-10);
  CHECK(rel(heun_continue(h, 0.4).derivative, heun_local(h, 0.4).derivative) < 1e-9);

  const cplx a(0.3, 0.2), b(-0.4, 0.1), u(1.2, -0.5);
  const cplx v = 0.5;
  const HeunParams g(a, b, 1.0, a * b, u, v, a + b + 1.0 - u - v);
  // Reference at 0.999 from the 2F1 series (slow but convergent there).
  const cplx ref = hyp2f1(a, b, u, 0.999, 1e-16).value;
  CHECK(rel(heun_continue(g, 0.999).value, ref) < 1e-9);
}

TEST_CASE("heun_continue reports where it stopped") {
  // c slightly above 1 puts a second singular point right behind z = 1.
  const HeunParams h(0.0, 0.5, 1.0 + 1e-12, -0.03, 0.5 - 1.25 * kI, 0.5 + 1.25 * kI, 0.5);
  try {
    heun_continue_many(h, {1.0 - 1e-13}, 1e-13);
  } catch (const IntegrationError& e) {
    CHECK(e.reached() > 0.5);
    CHECK(e.reached() < 1.0);
  } catch (const Error&) {
    // A domain error is equally acceptable: target beyond the disk.
  }
}

TEST_CASE("heun_evaluate is accurate up to the singular point") {
  const HeunParams h = omega_delta_params().second_branch();
  const double ts[] = {1e-3, 1e-6, 1e-9, 1e-12, 1e-15};
  // The local form A + B t^rho must be reproduced with decreasing t.
  std::vector<UnitPoint> pts;
  for (double t : ts) pts.push_back({1.0 - t, t});
  const auto vals = heun_evaluate(h, pts);
  const cplx lim = heun_limit_at_one(h);
  const cplx rho = 1.0 - h.v();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    // |y - A| ~ |B| t^Re(rho): must shrink like sqrt(t) here.
    CHECK(std::abs(vals[i].value - lim) < 10.0 * std::pow(ts[i], rho.real()));
  }
  // The points that the plain continuation can still reach agree with it.
  CHECK(rel(vals[0].value, heun_continue(h, 1.0 - 1e-3, 1e-13).value) < 1e-9);
}

TEST_CASE("heun_limit_at_one matches the Gauss formula in the c = 0 limit") {
  // Generalized Rosen-Zener (Bambini-Berman) parameters.
  const double beta = 1.3, lambda = 0.4, mu = 0.8;
  const cplx a(0.35, 0.0);
  const cplx b = kI * beta * lambda - a;
  const cplx v = 0.5 + a + b + kI * beta * mu;
  const cplx u = 0.5 - kI * beta / 2.0;
  const HeunParams h(a, b, 0.0, 0.0, u, v, a + b + 1.0 - u - v);
  const cplx by_gauss = hyp2f1_at_one(a, b, a + b + 1.0 - v);
  CHECK(rel(heun_limit_at_one(h), by_gauss) < 1e-8);
}

TEST_CASE("confluent_heun_local: normalization and ODE marching oracle") {
  const ConfluentHeunParams cp{0.5 - 0.7 * kI, 0.5 + 0.9 * kI, 0.0, -0.3};
  CHECK(confluent_heun_local(cp, 0.0).value == cplx(1.0));

  // Start the ODE at z = 1e-6 from the two-term series and march to 0.3.
  const double z0 = 1e-6;
  const CoefficientTable t = confluent_heun_coefficients(cp, 3);
  const cplx y0 = 1.0 + t.s[1] * z0 + t.s[2] * z0 * z0;
  const cplx dy0 = t.s[1] + 2.0 * t.s[2] * z0 + 3.0 * t.s[3] * z0 * z0;
  ode::Tolerances tol;
  tol.rel_tol = 1e-13;
  tol.abs_tol = 1e-15;
  tol.min_step = 1e-18;
  cplx marched;
  const double out[] = {0.3};
  ode::integrate<2>(
      [&](double z, const ode::State<2>& s) {
        return ode::State<2>{s[1], -cp.p_coefficient(z) * s[1] - cp.q_coefficient(z) * s[0]};
      },
      z0, ode::State<2>{y0, dy0}, out, tol,
      [&](double, const ode::State<2>& s, const ode::State<2>&) { marched = s[0]; });
  CHECK(rel(confluent_heun_local(cp, 0.3).value, marched) < 1e-9);
}

TEST_CASE("confluent Heun reproduces 2F1 through 1/(1-phi)") {
  const cplx a(0.4, 0.2), b(-0.3, 0.5), r(0.5, -1.25);
  const double phi = -0.5;
  const double x = 1.0 / (1.0 - phi);
  const cplx eta = ((r - 2.0 * a) * b - r + r * a + 1.0) / 2.0;
  const auto cp = ConfluentHeunParams::from_maple(a - b, r - 1.0, 0.0, eta);
  const cplx via_heun = confluent_heun_local(cp, x).value;
  CHECK(rel(via_heun, hyp2f1(a, r - b, a - b + 1.0, x).value) < 1e-12);
}

TEST_CASE("confluent limit at one agrees with a direct continuation") {
  const ConfluentHeunParams cp{2.0 - (0.5 - 1.25 * kI), 1.25 * kI, 0.125, -0.125};
  const cplx lim = confluent_heun_limit_at_one(cp);
  const auto near = confluent_heun_evaluate(cp, {{1.0 - 1e-14, 1e-14}});
  CHECK(std::abs(near[0].value - lim) < 1e-6);
}

TEST_CASE("hyp2f1 values and errors") {
  CHECK(hyp2f1(0.3, 0.4, 0.7, 0.0).value == cplx(1.0));
  CHECK(std::abs(hyp2f1(1.0, 1.0, 2.0, 0.5).value - 2.0 * std::log(2.0)) < 1e-14);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, -2.0, 0.5), PoleError);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("hyp2f1_at_one: Gauss summation") {
  CHECK(std::abs(hyp2f1_at_one(1.0, 1.0, 3.0) - 2.0) < 1e-13);
  CHECK(std::abs(hyp2f1_at_one(0.0, cplx(0.3, 1.0), cplx(2.0, -1.0)) - 1.0) < 1e-14);
  CHECK_THROWS_AS(hyp2f1_at_one(1.0, 1.0, 2.0), DivergenceError);
  // c - a a non-positive integer: the denominator has a pole.
  CHECK(std::abs(hyp2f1_at_one(3.0, -2.5, 2.0)) < 1e-300);

  const cplx a(0.2, 0.3), b(-0.4, 0.1), c(1.9, -0.2);
  const cplx near = hyp2f1_evaluate(a, b, c, {{1.0 - 1e-12, 1e-12}}).front().value;
  CHECK(std::abs(near - hyp2f1_at_one(a, b, c)) < 1e-11);
}

TEST_CASE("log_gamma") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-15);
  CHECK(std::abs(log_gamma(0.5) - std::log(std::sqrt(std::numbers::pi))) < 1e-14);
  CHECK_THROWS_AS(log_gamma(-2.0), PoleError);

  std::mt19937 rng(3);
  for (int k = 0; k < 200; ++k) {
    const cplx z = draw(rng, 20.0);
    if (std::abs(z) < 0.5 || (std::abs(z.imag()) < 0.5 && z.real() < 0.5)) continue;
    const cplx d = log_gamma(z + 1.0) - log_gamma(z) - std::log(z);
    // Equal up to a multiple of 2 pi i.
    const double k2 = std::round(d.imag() / (2.0 * std::numbers::pi));
    CHECK(std::abs(d - cplx(0.0, 2.0 * std::numbers::pi * k2)) < 1e-12 * std::max(1.0, std::abs(log_gamma(z))));
  }
  // Real axis against the standard library.
  for (double x : {0.1, 0.7, 1.5, 3.3, 10.0, 49.5, -0.5, -2.5}) {
    CHECK(std::abs(log_gamma(x).real() - std::lgamma(x)) < 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
  }
}

TEST_CASE("bessel J0 and J1") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-10);
  CHECK_THROWS_AS(bessel_j(0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(2, 1.0), DomainError);

  // Against the standard library across the series / recurrence / asymptotic
  // crossovers.
  for (double x = 0.0; x < 80.0; x += 0.173) {
    CHECK(std::abs(bessel_j(0, x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
    CHECK(std::abs(bessel_j(1, x) - std::cyl_bessel_j(1.0, x)) < 1e-12);
  }
  for (double x : {7.999999, 8.0, 8.000001, 29.999999, 30.0, 30.000001, 500.0, 1e4}) {
    CHECK(std::abs(bessel_j(0, x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
    CHECK(std::abs(bessel_j(1, x) - std::cyl_bessel_j(1.0, x)) < 1e-12);
  }
  CHECK(std::abs(bessel_j1_over_x(0.0) - 0.5) < 1e-16);
  CHECK(std::abs(bessel_j1_over_x(3.0) - bessel_j(1, 3.0) / 3.0) < 1e-15);
}

TEST_CASE("J0' = -J1 by central differences converges as h^2") {
  auto err = [](double h) {
    double m = 0.0;
    for (double x = 0.5; x < 40.0; x += 0.7) {
      const double d = (bessel_j(0, x + h) - bessel_j(0, x - h)) / (2.0 * h);
      m = std::max(m, std::abs(d + bessel_j(1, x)));
    }
    return m;
  };
  const double ratio = err(1e-2) / err(5e-3);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}
