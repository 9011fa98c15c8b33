// Exact amplitudes from the Heun, confluent Heun and Gauss representations.
//
// Every smooth exactly solvable pulse reduces, in phi = phi(tau), to a
// Fuchs-type equation whose exponent-(1-u) branch at phi = 0 is the one that
// vanishes for tau -> -infinity:
//   Ca = P phi^e (1 - phi)^xi y(phi),   e = 1 - u.
// y is a local solution (series about 0, ODE continuation, matched series
// about 1) and
// P follows from first-order perturbation theory at early times.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "heunpulse/dynamics.hpp"
#include "heunpulse/errors.hpp"
#include "heunpulse/specfun.hpp"

namespace heunpulse::dynamics {

namespace {

using pulses::PulseKind;
using pulses::PulseSpec;
using specfun::ConfluentHeunParams;
using specfun::HeunParams;
using specfun::SeriesResult;

constexpr cplx kI(0.0, 1.0);

struct Gauss {
  cplx a, b, c;
};

struct Branch {
  std::variant<HeunParams, ConfluentHeunParams, Gauss> local;
  cplx prefactor;
  cplx exponent;      // e
  cplx xi = 0.0;      // exponent of (1 - phi)
  pulses::PhaseMap map;
};

Branch make_branch(const PulseSpec& spec) {
  const auto& prm = spec.params();
  const double beta = prm.beta, gamma = prm.gamma;
  Branch br{HeunParams(0.0, 0.0, 2.0, 0.0, 0.5, 0.5, 0.0), 0.0, 0.0, 0.0, spec.phase_map()};

  switch (spec.kind()) {
    case PulseKind::omega_delta:
    case PulseKind::smooth_box: {
      const auto hp = std::get<HeunParams>(pulses::heun_params_for(spec));
      br.local = hp.second_branch();
      br.exponent = 1.0 - hp.u();
      br.prefactor = leading_prefactor(2.0 * gamma / std::sqrt(spec.delta() + 1.0), 1.0, beta);
      return br;
    }
    case PulseKind::heun_family: {
      const auto hp = std::get<HeunParams>(pulses::heun_params_for(spec));
      const auto& f = spec.heun();
      const double mu = f.map.mu();
      br.local = hp.second_branch();
      br.exponent = 1.0 - hp.u();
      br.prefactor = leading_prefactor(2.0 * std::sqrt(-f.q / f.c) / mu, 1.0 / mu, beta);
      return br;
    }
    case PulseKind::omega_one: {
      const cplx u = 0.5 - kI * beta / 2.0;
      const cplx v = 1.0 + kI * beta / 2.0;
      const cplx xi = omega_one_xi(prm);
      br.local = Gauss{xi + v, xi + 1.0 - u, 2.0 - u};
      br.exponent = 1.0 - u;
      br.xi = xi;
      br.prefactor = leading_prefactor(gamma * std::numbers::sqrt2, 1.0, beta);
      return br;
    }
    case PulseKind::sech: {
      const cplx r = 0.5 - kI * beta / 2.0;
      br.local = Gauss{-gamma - r + 1.0, gamma - r + 1.0, 2.0 - r};
      br.exponent = 1.0 - r;
      br.prefactor = leading_prefactor(2.0 * gamma, 1.0, beta);
      return br;
    }
    case PulseKind::omega_plus:
    case PulseKind::omega_minus:
    case PulseKind::confluent_family: {
      const auto cp = std::get<ConfluentHeunParams>(pulses::heun_params_for(spec));
      br.local = cp.second_branch();
      br.exponent = 1.0 - cp.u;
      double k = 0.0, kappa = 1.0;
      if (spec.kind() == PulseKind::omega_plus) {
        k = 2.0 * std::numbers::sqrt2 * gamma;
        kappa = 2.0;
      } else if (spec.kind() == PulseKind::omega_minus) {
        k = 2.0 * std::numbers::sqrt2 * gamma;
      } else {
        const auto& f = spec.confluent();
        const double mu = f.map.mu();
        if (f.q != 0.0) {
          k = 2.0 * std::sqrt(-f.q) / mu;
          kappa = 1.0 / mu;
        } else {
          k = 2.0 * std::sqrt(-f.p) / mu;
          kappa = 2.0 / mu;
        }
      }
      br.prefactor = leading_prefactor(k, kappa, beta);
      return br;
    }
    case PulseKind::box:
      break;
  }
  throw UnsupportedError("analytic: no Heun-type representation for this pulse");
}

// y(phi) and dy/dphi on a batch of phase samples.
std::vector<SeriesResult> evaluate_local(const Branch& br,
                                         const std::vector<pulses::PhaseSample>& ps) {
  std::vector<specfun::UnitPoint> pts;
  pts.reserve(ps.size());
  for (const auto& p : ps) pts.push_back({p.phi, p.complement});
  return std::visit(
      [&](const auto& p) -> std::vector<SeriesResult> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HeunParams>) {
          return specfun::heun_evaluate(p, pts);
        } else if constexpr (std::is_same_v<T, ConfluentHeunParams>) {
          return specfun::confluent_heun_evaluate(p, pts);
        } else {
          return specfun::hyp2f1_evaluate(p.a, p.b, p.c, pts);
        }
      },
      br.local);
}

std::vector<AnalyticSample> box_trajectory(const PulseSpec& spec,
                                           const std::vector<double>& taus) {
  const double beta = spec.params().beta, gamma = spec.params().gamma;
  const double tau_end = spec.box_tau_end();
  const double rabi = std::sqrt(beta * beta / 4.0 + gamma * gamma);
  auto state_at = [&](double tau) -> std::pair<cplx, cplx> {
    if (tau <= 0.0) return {0.0, 1.0};
    const double s = std::min(tau, tau_end);
    const cplx ca = kI * gamma / rabi * std::polar(1.0, beta * s / 2.0) * std::sin(rabi * s);
    const cplx cb = std::polar(1.0, -beta * s / 2.0) *
                    (std::cos(rabi * s) + kI * (beta / 2.0) / rabi * std::sin(rabi * s));
    return {ca, cb};
  };
  std::vector<AnalyticSample> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    const auto [ca, cb] = state_at(tau);
    out.push_back({tau, ca, cb});
  }
  return out;
}

}  // namespace

cplx leading_prefactor(double k, double kappa, double beta) {
  return kI * k / (kappa + kI * beta);
}

cplx omega_one_xi(const pulses::DimensionlessParams& params) {
  const cplx v = 1.0 + kI * params.beta / 2.0;
  const double q = params.gamma * params.gamma / 2.0;
  const cplx h = (1.0 - v) / 2.0;
  return h + std::sqrt(h * h - q);
}

cplx printed_prefactor_omega_one(const pulses::DimensionlessParams& params) {
  const cplx u = 0.5 - kI * params.beta / 2.0;
  const cplx xi = omega_one_xi(params);
  // (-1)^(xi + 1/2) on the principal branch, e^{i pi (xi + 1/2)}.
  const cplx sign = std::exp(kI * std::numbers::pi * (xi + 0.5));
  return params.gamma / (std::numbers::sqrt2 * (u - 1.0) * sign);
}

std::vector<AnalyticSample> analytic_trajectory(const PulseSpec& spec,
                                                const std::vector<double>& taus) {
  if (spec.kind() == PulseKind::box) return box_trajectory(spec, taus);

  const Branch br = make_branch(spec);
  const double beta = spec.params().beta;

  std::vector<pulses::PhaseSample> ps;
  ps.reserve(taus.size());
  for (double tau : taus) ps.push_back(br.map.phase_of_time(tau));

  std::vector<AnalyticSample> out(taus.size());
  if (spec.params().gamma == 0.0 && spec.kind() != PulseKind::heun_family &&
      spec.kind() != PulseKind::confluent_family) {
    for (std::size_t i = 0; i < taus.size(); ++i) out[i] = {taus[i], 0.0, 1.0};
    return out;
  }

  const std::vector<SeriesResult> loc = evaluate_local(br, ps);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double phi = ps[i].phi, comp = ps[i].complement;
    const cplx power = std::exp(br.exponent * std::log(phi) + br.xi * std::log(comp));
    const cplx ca = br.prefactor * power * loc[i].value;
    const cplx dca_dphi =
        br.prefactor * power * (loc[i].value * (br.exponent / phi - br.xi / comp) + loc[i].derivative);
    const double om = spec.omega(taus[i]);
    cplx cb(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
    if (om > 0.0) {
      const cplx dca_dtau = br.map.rate(ps[i]) * dca_dphi;
      cb = dca_dtau * std::polar(1.0, -beta * taus[i]) / (kI * om);
    }
    out[i] = {taus[i], ca, cb};
  }
  return out;
}

cplx analytic_omega_delta(double delta, const pulses::DimensionlessParams& params, double tau) {
  return analytic_trajectory(PulseSpec::omega_delta(delta, params), {tau}).front().ca;
}

cplx analytic_omega_one(const pulses::DimensionlessParams& params, double tau) {
  return analytic_trajectory(PulseSpec::omega_one(params), {tau}).front().ca;
}

cplx analytic_omega_pm(int sign, const pulses::DimensionlessParams& params, double tau) {
  const PulseSpec spec =
      sign >= 0 ? PulseSpec::omega_plus(params) : PulseSpec::omega_minus(params);
  return analytic_trajectory(spec, {tau}).front().ca;
}

cplx analytic_box(double delta_abs, double omega0, double t0, double t) {
  if (!(t >= 0.0 && t < t0)) throw DomainError("analytic_box: requires 0 <= t < t0");
  const double rabi = std::sqrt(delta_abs * delta_abs / 4.0 + omega0 * omega0);
  if (rabi == 0.0) return 0.0;
  return kI * omega0 / rabi * std::polar(1.0, delta_abs * t / 2.0) * std::sin(rabi * t);
}

double final_population(const PulseSpec& spec) {
  if (spec.kind() == PulseKind::box) {
    const auto s = box_trajectory(spec, {spec.box_tau_end()});
    return std::norm(s.front().ca);
  }
  if (!spec.vanishes_at_late_times()) {
    throw DivergenceError("final_population: the envelope does not vanish as tau -> +inf");
  }
  const Branch br = make_branch(spec);
  if (br.prefactor == cplx(0.0)) return 0.0;
  const cplx limit = std::visit(
      [](const auto& p) -> cplx {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HeunParams>) {
          return specfun::heun_limit_at_one(p);
        } else if constexpr (std::is_same_v<T, ConfluentHeunParams>) {
          return specfun::confluent_heun_limit_at_one(p);
        } else {
          return specfun::hyp2f1_at_one(p.a, p.b, p.c);
        }
      },
      br.local);
  return std::norm(br.prefactor * limit);
}

}  // namespace heunpulse::dynamics
