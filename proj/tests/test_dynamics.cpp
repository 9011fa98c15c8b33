#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heunpulse/dynamics.hpp"
#include "heunpulse/errors.hpp"

using namespace heunpulse;
using namespace heunpulse::dynamics;
using heunpulse::pulses::DimensionlessParams;
using heunpulse::pulses::PulseSpec;

namespace {

constexpr double kPi = std::numbers::pi;

IntegratorConfig span(double lo, double hi, std::size_t n = 201) {
  IntegratorConfig c;
  c.tau_min = lo;
  c.tau_max = hi;
  c.sample_count = n;
  return c;
}

// Rosen-Zener: |Ca(inf)|^2 = sin^2(pi gamma) sech^2(pi beta / 2).
double rosen_zener(double gamma, double beta) {
  const double s = std::sin(kPi * gamma) / std::cosh(kPi * beta / 2.0);
  return s * s;
}

}  // namespace

TEST_CASE("zero drive leaves the ground state untouched") {
  const auto spec = PulseSpec::sech({1.0, 0.7, 0.0});
  const Trajectory tr = evolve_numeric(spec, span(-10.0, 10.0));
  for (const auto& s : tr.samples) {
    CHECK(std::abs(s.state.ca) == 0.0);
    CHECK(std::abs(s.state.cb - 1.0) == 0.0);
  }
  CHECK(final_population(spec) == 0.0);
  const auto an = analytic_trajectory(PulseSpec::omega_delta(2.0, {1.0, 0.7, 0.0}), {-1.0, 2.0});
  CHECK(std::abs(an[1].ca) == 0.0);
}

TEST_CASE("resonant area examples") {
  CHECK(resonant_probability(kPi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(resonant_probability(2.0 * kPi) < 1e-30);
  CHECK(resonant_probability(kPi / 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(resonant_probability(-1.0), DomainError);

  // gamma = 1/2 sech: area 2 int Omega = pi.
  const auto half = PulseSpec::sech({1.0, 0.0, 0.5});
  CHECK(final_population_numeric(half, span(-40.0, 40.0)) ==
        doctest::Approx(1.0).epsilon(1e-9));
  const auto one = PulseSpec::sech({1.0, 0.0, 1.0});
  CHECK(final_population_numeric(one, span(-40.0, 40.0)) < 1e-9);
}

TEST_CASE("sech matches Rosen-Zener") {
  for (double g : {0.1, 0.25, 0.5, 1.3}) {
    for (double b : {0.0, 0.4, 1.0, 2.5}) {
      const auto spec = PulseSpec::sech({1.0, b, g});
      CHECK(final_population(spec) == doctest::Approx(rosen_zener(g, b)).epsilon(1e-10));
      CHECK(std::abs(final_population_numeric(spec, span(-40.0, 40.0)) - rosen_zener(g, b)) <
            1e-9);
    }
  }
}

TEST_CASE("box pulse: closed form, numerics and the physical-time form") {
  const DimensionlessParams p{0.5, 0.8, 0.3};
  const double t0 = 20.0;
  const auto spec = PulseSpec::box(t0, p);
  const double tau_end = spec.box_tau_end();
  IntegratorConfig cfg = span(-1.0, tau_end + 2.0, 301);
  const Trajectory tr = evolve_numeric(spec, cfg);
  std::vector<double> taus;
  for (const auto& s : tr.samples) taus.push_back(s.tau);
  const auto an = analytic_trajectory(spec, taus);
  double err = 0.0;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    err = std::max(err, std::abs(an[i].ca - tr.samples[i].state.ca));
    err = std::max(err, std::abs(an[i].cb - tr.samples[i].state.cb));
  }
  CHECK(err < 1e-9);

  // Physical time: detuning and Rabi frequency scale with alpha.
  for (double t : {0.0, 1.0, 7.5, 19.9}) {
    const cplx phys = analytic_box(p.beta * p.alpha, p.gamma * p.alpha, t0, t);
    const cplx dimless = analytic_trajectory(spec, {p.alpha * t}).front().ca;
    CHECK(std::abs(phys - dimless) < 1e-14);
  }
  CHECK_THROWS_AS(analytic_box(0.1, 0.2, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(analytic_box(0.1, 0.2, 1.0, -0.1), DomainError);
  CHECK(final_population(spec) == doctest::Approx(std::norm(an.back().ca)).epsilon(1e-14));
}

TEST_CASE("Riccati integration") {
  // gamma = 1/4 sech has area pi/2.
  const auto quarter = PulseSpec::sech({1.0, 0.0, 0.25});
  const auto r = evolve_riccati(quarter, span(-40.0, 40.0));
  CHECK(r.back().abs_ca * r.back().abs_ca == doctest::Approx(0.5).epsilon(1e-9));

  // Large area crosses |f| = 10 several times.
  const auto strong = PulseSpec::omega_delta(2.0, {1.0, 1.0, 2.0});
  const IntegratorConfig cfg = span(-30.0, 30.0, 121);
  const auto ric = evolve_riccati(strong, cfg);
  const Trajectory num = evolve_numeric(strong, cfg);
  REQUIRE(ric.size() == num.samples.size());
  double err = 0.0;
  for (std::size_t i = 0; i < ric.size(); ++i) {
    err = std::max(err, std::abs(ric[i].abs_ca - std::abs(num.samples[i].state.ca)));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("analytic Omega_delta agrees with numerics across the parameter grid") {
  for (double g : {0.1, 0.25, 1.0}) {
    for (double b : {0.0, 1.0, 2.5}) {
      for (double d : {1.1, 2.0, 11.0}) {
        const auto spec = PulseSpec::omega_delta(d, {1.0, b, g});
        const IntegratorConfig cfg = span(-30.0, 15.0, 91);
        const Trajectory num = evolve_numeric(spec, cfg);
        std::vector<double> taus;
        for (const auto& s : num.samples) taus.push_back(s.tau);
        const auto an = analytic_trajectory(spec, taus);
        double err = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
          err = std::max(err, std::abs(an[i].ca - num.samples[i].state.ca));
        }
        INFO("gamma=" << g << " beta=" << b << " delta=" << d);
        CHECK(err < 1e-7);
      }
    }
  }
}

TEST_CASE("analytic solutions of the other named kinds") {
  const DimensionlessParams p{1.0, 2.5, 0.25};
  for (const auto& spec : {PulseSpec::omega_plus(p), PulseSpec::omega_minus(p),
                           PulseSpec::omega_one(p), PulseSpec::sech(p)}) {
    const IntegratorConfig cfg = span(-30.0, 12.0, 85);
    const Trajectory num = evolve_numeric(spec, cfg);
    std::vector<double> taus;
    for (const auto& s : num.samples) taus.push_back(s.tau);
    const auto an = analytic_trajectory(spec, taus);
    double err = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      err = std::max(err, std::abs(an[i].ca - num.samples[i].state.ca));
      if (std::isfinite(an[i].cb.real()) && spec.omega(taus[i]) > 1e-6) {
        err = std::max(err, std::abs(an[i].cb - num.samples[i].state.cb));
      }
    }
    INFO(pulses::to_string(spec.kind()));
    CHECK(err < 1e-7);
  }
  CHECK(std::abs(analytic_omega_pm(1, p, 0.3) -
                 analytic_trajectory(PulseSpec::omega_plus(p), {0.3}).front().ca) < 1e-15);
  CHECK(std::abs(analytic_omega_delta(2.0, p, -0.4) -
                 analytic_trajectory(PulseSpec::omega_delta(2.0, p), {-0.4}).front().ca) < 1e-15);
  CHECK(std::abs(analytic_omega_one(p, 1.0) -
                 analytic_trajectory(PulseSpec::omega_one(p), {1.0}).front().ca) < 1e-15);
}

TEST_CASE("final_population against long numeric runs") {
  const DimensionlessParams p{1.0, 1.0, 0.5};
  for (const auto& spec : {PulseSpec::omega_delta(1.1, p), PulseSpec::omega_delta(3.0, p),
                           PulseSpec::omega_plus(p), PulseSpec::omega_minus(p)}) {
    INFO(pulses::to_string(spec.kind()));
    CHECK(std::abs(final_population(spec) - final_population_numeric(spec, span(-40.0, 60.0))) <
          1e-5);
  }
  CHECK_THROWS_AS(final_population(PulseSpec::omega_one(p)), DivergenceError);
}

TEST_CASE("Omega_1 prefactor: recomputed vs printed") {
  const DimensionlessParams p{1.0, 2.5, 0.25};
  const cplx xi = omega_one_xi(p);
  // Both constants describe the same branch; they differ only by the
  // (-1)^xi factor moved into the (1 - phi)^xi form.
  const cplx printed = printed_prefactor_omega_one(p);
  const cplx kI(0.0, 1.0);
  const cplx recomputed = leading_prefactor(p.gamma * std::sqrt(2.0), 1.0, p.beta);
  CHECK(std::abs(xi) > 0.0);
  CHECK(std::abs(printed - recomputed * std::exp(-kI * kPi * xi)) / std::abs(printed) < 1e-13);
}

TEST_CASE("leading_prefactor") {
  const cplx kI(0.0, 1.0);
  CHECK(std::abs(leading_prefactor(2.0, 1.0, 0.0) - 2.0 * kI) < 1e-15);
  CHECK(std::abs(leading_prefactor(1.0, 2.0, 2.0) - kI / (2.0 + 2.0 * kI)) < 1e-15);
}

TEST_CASE("normalization is preserved") {
  const auto spec = PulseSpec::omega_delta(2.0, {1.0, 2.5, 1.5});
  IntegratorConfig cfg = span(-30.0, 30.0, 401);
  const Trajectory tr = evolve_numeric(spec, cfg);
  CHECK(tr.max_norm_defect() <= 100.0 * cfg.rel_tol);
  CHECK(tr.samples.size() == 401);
  CHECK(tr.samples.front().tau == -30.0);
  CHECK(tr.samples.back().tau == 30.0);
}

TEST_CASE("IntegratorConfig validation") {
  IntegratorConfig c;
  CHECK_NOTHROW(c.validate());
  c.rel_tol = 1e-16;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.abs_tol = 1e-2;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.tau_max = c.tau_min;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.sample_count = 1;
  CHECK_THROWS_AS(c.validate(), DomainError);
  const auto g = sample_grid(span(0.0, 1.0, 5));
  CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}
