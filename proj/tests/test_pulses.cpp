#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heunpulse/errors.hpp"
#include "heunpulse/pulses.hpp"

using namespace heunpulse;
using namespace heunpulse::pulses;

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

DimensionlessParams fig5() { return {1.0, 2.5, 0.25}; }

}  // namespace

TEST_CASE("DimensionlessParams") {
  const auto p = DimensionlessParams::from_physical(0.02, 0.08, 0.2);
  CHECK(p.gamma == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(p.alpha == 0.08);
  CHECK_THROWS_AS((DimensionlessParams{0.0, 1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((DimensionlessParams{1.0, 1.0, -1.0}.validate()), DomainError);
}

TEST_CASE("time_of_phase examples") {
  CHECK(std::abs(time_of_phase(PhaseMap(1.0, 0.0), 0.5)) < 1e-16);
  CHECK(time_of_phase(PhaseMap(2.0, 1.0), 0.5) == doctest::Approx(std::log(2.0) / 2.0));
  CHECK(time_of_phase(PhaseMap(1.0, 0.0), (1.0 + std::tanh(1.0)) / 2.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(time_of_phase(PhaseMap(1.0, 0.0), 1.0), DomainError);
  CHECK_THROWS_AS(time_of_phase(PhaseMap(1.0, 0.0), 0.0), DomainError);
  CHECK_THROWS_AS(PhaseMap(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(PhaseMap(1.0, -1.0), DomainError);
}

TEST_CASE("phase_of_time examples") {
  CHECK(phase_of_time(PhaseMap(1.0, 0.0), 0.0).phi == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phase_of_time(PhaseMap(1.0, 0.0), 1.0).phi ==
        doctest::Approx((1.0 + std::tanh(1.0)) / 2.0).epsilon(1e-14));
  CHECK(phase_of_time(PhaseMap(2.0, 1.0), std::log(2.0) / 2.0).phi ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("phase map round trip, monotonicity and rate") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> mus(0.2, 3.0), ratio(-0.9, 3.0);
  for (int k = 0; k < 20; ++k) {
    const double mu = mus(rng);
    const PhaseMap map(mu, mu * ratio(rng));
    for (double phi : {1e-6, 1e-3, 0.1, 0.37, 0.5, 0.9, 0.999, 1.0 - 1e-6}) {
      CHECK(std::abs(map.phase_of_time(map.time_of_phase(phi)).phi - phi) < 1e-10);
    }
    double last = -1.0;
    for (double t = -40.0; t <= 40.0; t += 0.25) {
      const double phi = map.phase_of_time(t).phi;
      CHECK(phi >= last);
      last = phi;
    }
    auto err = [&](double h) {
      double m = 0.0;
      for (double t = -3.0; t <= 3.0; t += 0.5) {
        const double d = (map.phase_of_time(t + h).phi - map.phase_of_time(t - h).phi) / (2 * h);
        m = std::max(m, std::abs(d - map.rate(map.phase_of_time(t))));
      }
      return m;
    };
    const double r = err(1e-2) / err(5e-3);
    CHECK(r > 3.5);
    CHECK(r < 4.5);
  }
}

TEST_CASE("phase_of_time keeps both tails accurate") {
  const PhaseMap map(1.0, 0.0);
  const PhaseSample lo = map.phase_of_time(-30.0);
  CHECK(lo.phi == doctest::Approx(std::exp(-60.0)).epsilon(1e-12));
  CHECK_FALSE(lo.saturated);
  const PhaseSample hi = map.phase_of_time(30.0);
  CHECK(hi.complement == doctest::Approx(std::exp(-60.0)).epsilon(1e-12));
  const PhaseSample far = map.phase_of_time(-1000.0);
  CHECK(far.saturated);
  CHECK(far.phi > 0.0);
}

TEST_CASE("omega_heun_family examples") {
  const double g = 0.25, delta = 2.0;
  const HeunFamily f{0.0, -g * g / 2.0, (delta + 1.0) / 2.0, PhaseMap(1.0, 0.0)};
  CHECK(omega_heun_family(f, 0.0) == doctest::Approx(g / std::sqrt(delta)).epsilon(1e-14));
  const auto named = PulseSpec::omega_delta(delta, fig5());
  for (double t = -10.0; t <= 10.0; t += 0.37) {
    CHECK(std::abs(omega_heun_family(f, t) - named.omega(t)) < 1e-10);
  }
  const HeunFamily zero{0.0, 0.0, 2.0, PhaseMap(1.0, 0.0)};
  CHECK(omega_heun_family(zero, 0.7) == 0.0);
  const HeunFamily sym{0.0, -1.0, 2.0, PhaseMap(1.0, 0.0)};
  // c -> infinity removes the asymmetry of the (c - phi) factor.
  const HeunFamily wide{0.0, -1e6, 1e6, PhaseMap(1.0, 0.0)};
  for (double t : {0.3, 1.0, 2.5}) {
    CHECK(std::abs(omega_heun_family(wide, t) - omega_heun_family(wide, -t)) < 1e-5);
  }
  CHECK(omega_heun_family(sym, 1.0) > 0.0);
}

TEST_CASE("heun_family construction checks the radicand") {
  CHECK_THROWS_AS(PulseSpec::heun_family({0.0, 1.0, 2.0, PhaseMap(1.0, 0.0)}, fig5()),
                  DomainError);
  CHECK_THROWS_AS(PulseSpec::heun_family({0.0, -1.0, 0.5, PhaseMap(1.0, 0.0)}, fig5()),
                  DomainError);
  CHECK_NOTHROW(PulseSpec::heun_family({0.0, -1.0, 2.0, PhaseMap(1.0, 2.0)}, fig5()));
}

TEST_CASE("omega_confluent_family examples") {
  // p = -1, q = 1 is sign-invalid on (0, 1); the valid mirror p = 1, q = -1
  // gives sqrt(4 * 0.25 * 0.5) at phi = 1/2.
  CHECK_THROWS_AS(PulseSpec::confluent_family({-1.0, 1.0, PhaseMap(1.0, 0.0)}, fig5()),
                  DomainError);
  const ConfluentFamily g{1.0, -1.0, PhaseMap(1.0, 0.0)};
  CHECK(omega_confluent_family(g, 0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  for (double t : {-7.0, -1.0, 0.2, 1.0, 3.0}) {
    const PhaseSample s = phase_of_time(g.map, t);
    CHECK(omega_confluent_family(g, t) ==
          doctest::Approx(2.0 * s.complement * std::sqrt(s.phi)).epsilon(1e-13));
  }
  const ConfluentFamily zero{0.0, 0.0, PhaseMap(1.0, 0.0)};
  CHECK(omega_confluent_family(zero, 0.4) == 0.0);
}

TEST_CASE("named pulses") {
  const auto p = fig5();
  CHECK(PulseSpec::omega_plus(p).omega(0.0) == doctest::Approx(0.25));
  for (double t = -6.0; t <= 6.0; t += 0.31) {
    CHECK(std::abs(PulseSpec::omega_minus(p).omega(t) - PulseSpec::omega_plus(p).omega(-t)) <
          1e-15);
  }
  const auto sb = PulseSpec::smooth_box(1.0 + 1e-9, p);
  CHECK(sb.omega(-3.0) == doctest::Approx(0.25 * 0.0704).epsilon(2e-3));
  CHECK(PulseSpec::sech(p).omega(1.0) == doctest::Approx(0.25 / std::cosh(1.0)));
  CHECK(PulseSpec::omega_one(p).omega(40.0) == doctest::Approx(0.25 * std::sqrt(2.0)));
  const auto box = PulseSpec::box(10.0, {0.5, 0.0, 0.3});
  CHECK(box.box_tau_end() == 5.0);
  CHECK(box.omega(2.0) == 0.3);
  CHECK(box.omega(-0.1) == 0.0);
  CHECK(box.omega(5.1) == 0.0);
  CHECK_THROWS_AS(PulseSpec::omega_delta(1.0, p), DomainError);
  CHECK_THROWS_AS(PulseSpec::box(0.0, p), DomainError);
}

TEST_CASE("positivity and decay") {
  const auto p = fig5();
  const std::vector<PulseSpec> all{PulseSpec::sech(p), PulseSpec::omega_delta(2.0, p),
                                   PulseSpec::omega_plus(p), PulseSpec::omega_minus(p),
                                   PulseSpec::omega_one(p)};
  for (const auto& s : all) {
    for (double t = -50.0; t <= 50.0; t += 0.5) CHECK(s.omega(t) >= 0.0);
    CHECK(s.omega(-60.0) < 1e-20);
    if (s.vanishes_at_late_times()) CHECK(s.omega(60.0) < 1e-20);
  }
}

TEST_CASE("parse and print pulse kinds") {
  CHECK(parse_pulse_kind("omega-delta") == PulseKind::omega_delta);
  CHECK(parse_pulse_kind("omega_plus") == PulseKind::omega_plus);
  CHECK_FALSE(parse_pulse_kind("gauss").has_value());
  CHECK(to_string(PulseKind::smooth_box) == "smooth_box");
}

TEST_CASE("pulse_area") {
  CHECK(pulse_area(PulseSpec::sech({1.0, 0.0, 1.0}), -INFINITY, INFINITY) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  const auto box = PulseSpec::box(8.0, {0.5, 0.0, 0.3});
  CHECK(pulse_area(box, -10.0, 10.0) == doctest::Approx(0.3 * 4.0).epsilon(1e-12));
  CHECK(pulse_area(PulseSpec::sech({1.0, 0.0, 0.0}), -5.0, 5.0) == 0.0);
  CHECK_THROWS_AS(pulse_area(box, 1.0, 1.0), DomainError);
}

TEST_CASE("heun_params_for") {
  const auto p = fig5();
  const auto od = std::get<specfun::HeunParams>(heun_params_for(PulseSpec::omega_delta(2.0, p)));
  CHECK(std::abs(od.u() - (0.5 - 1.25 * kI)) < 1e-15);
  CHECK(std::abs(od.v() - (0.5 + 1.25 * kI)) < 1e-15);
  CHECK(std::abs(od.w() - 0.5) < 1e-15);
  CHECK(std::abs(od.a()) < 1e-15);
  CHECK(std::abs(od.b() - 0.5) < 1e-15);
  CHECK(std::abs(od.c() - 1.5) < 1e-15);
  CHECK(std::abs(od.q() + 0.03125) < 1e-15);

  const auto fam = std::get<specfun::HeunParams>(
      heun_params_for(PulseSpec::heun_family({0.0, -0.5, 2.0, PhaseMap(1.0, 0.0)}, p)));
  CHECK(std::abs(fam.u() - (0.5 - 1.25 * kI)) < 1e-15);
  CHECK(std::abs(fam.v() - (0.5 + 1.25 * kI)) < 1e-15);
  CHECK(std::abs(fam.b() - 0.5) < 1e-15);

  const auto om = std::get<specfun::ConfluentHeunParams>(
      heun_params_for(PulseSpec::omega_minus(p)));
  CHECK(std::abs(om.p - 0.125) < 1e-15);
  CHECK(std::abs(om.q + 0.125) < 1e-15);

  CHECK_THROWS_AS(heun_params_for(PulseSpec::box(1.0, p)), UnsupportedError);
  CHECK_THROWS_AS(heun_params_for(PulseSpec::heun_family({0.3, -0.5, 2.0, PhaseMap(1.0, 0.0)}, p)),
                  UnsupportedError);
}
