#include "heunpulse/pulses.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "heunpulse/errors.hpp"

namespace heunpulse::pulses {

using specfun::cplx;

namespace {

constexpr cplx kI(0.0, 1.0);

// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// 1 + tanh(tau) and 1 - tanh(tau), both without cancellation.
double one_plus_tanh(double tau) { return 2.0 / (1.0 + std::exp(-2.0 * tau)); }
double one_minus_tanh(double tau) { return 2.0 / (1.0 + std::exp(2.0 * tau)); }
double sech(double tau) {
  const double a = std::abs(tau);
  if (a > 700.0) return 0.0;
  return 1.0 / std::cosh(a);
}

constexpr int kRadicandGrid = 1024;

void check_radicand(const char* what, auto&& radicand_at) {
  // Interior grid plus the two endpoint limits (approached from inside).
  for (int i = 0; i <= kRadicandGrid + 1; ++i) {
    double phi;
    if (i == 0) {
      phi = 1e-12;
    } else if (i == kRadicandGrid + 1) {
      phi = 1.0 - 1e-12;
    } else {
      phi = static_cast<double>(i) / (kRadicandGrid + 1);
    }
    if (radicand_at(phi) < 0.0) {
      std::ostringstream os;
      os << what << ": negative envelope radicand at phi = " << phi;
      throw DomainError(os.str());
    }
  }
}

double clamp_radicand(double r, double scale, const char* what) {
  if (r >= 0.0) return r;
  if (r > -1e-14 * std::max(scale, 1.0)) return 0.0;
  throw DomainError(std::string(what) + ": negative radicand");
}

}  // namespace

void DimensionlessParams::validate() const {
  if (!(std::isfinite(alpha) && std::isfinite(beta) && std::isfinite(gamma))) {
    throw DomainError("DimensionlessParams: non-finite value");
  }
  if (!(alpha > 0.0)) throw DomainError("DimensionlessParams: alpha must be > 0");
  if (!(gamma >= 0.0)) throw DomainError("DimensionlessParams: gamma must be >= 0");
}

DimensionlessParams DimensionlessParams::from_physical(double omega0, double alpha,
                                                       double detuning) {
  if (!(alpha > 0.0)) throw DomainError("from_physical: alpha must be > 0");
  DimensionlessParams p{alpha, detuning / alpha, omega0 / alpha};
  p.validate();
  return p;
}

// --- phase map --------------------------------------------------------------

PhaseMap::PhaseMap(double mu, double lambda) : mu_(mu), lambda_(lambda) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("PhaseMap: mu must be > 0");
  if (!(lambda / mu > -1.0) || !std::isfinite(lambda)) {
    throw DomainError("PhaseMap: lambda / mu must be > -1");
  }
}

double PhaseMap::time_of_phase(double phi) const {
  if (!(phi > 0.0 && phi < 1.0)) {
    throw DomainError("time_of_phase: phi on the boundary maps to infinite time");
  }
  return 0.5 * (mu_ * std::log(phi) - (mu_ + lambda_) * std::log1p(-phi));
}

PhaseSample PhaseMap::phase_of_time(double tau, double tol) const {
  if (!(tol > 0.0)) throw DomainError("phase_of_time: tol must be positive");
  if (!std::isfinite(tau)) {
    PhaseSample s;
    s.phi = tau > 0 ? 1.0 : 0.0;
    s.complement = 1.0 - s.phi;
    s.saturated = true;
    return s;
  }
  const double nu = mu_ + lambda_;
  // Solve in x = logit(phi): g(x) = mu log s(x) - nu log s(-x) - 2 tau is
  // strictly increasing with slope in [min(mu, nu), max(mu, nu)].
  auto g = [&](double x) { return mu_ * log_sigmoid(x) - nu * log_sigmoid(-x) - 2.0 * tau; };
  auto dg = [&](double x) { return mu_ * sigmoid(-x) + nu * sigmoid(x); };

  const double slope_min = std::min(mu_, nu);
  const double g0 = g(0.0);
  double lo = -std::abs(g0) / slope_min - 1.0;
  double hi = std::abs(g0) / slope_min + 1.0;
  // Start from the matching asymptote.
  double x = tau < 0.0 ? 2.0 * tau / mu_ : 2.0 * tau / nu;
  x = std::clamp(x, lo, hi);

  for (int it = 0; it < 200; ++it) {
    const double gx = g(x);
    if (std::abs(gx) <= 2.0 * tol) break;
    if (gx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double xn = x - gx / dg(x);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= 1e-16 * std::max(1.0, std::abs(x))) {
      x = xn;
      break;
    }
    x = xn;
  }

  PhaseSample s;
  s.phi = sigmoid(x);
  s.complement = sigmoid(-x);
  // phi and 1 - phi are each accurate on their own; only underflow saturates.
  if (s.complement <= 0.0) {
    s.complement = std::numeric_limits<double>::denorm_min();
    s.saturated = true;
  } else if (s.phi <= 0.0) {
    s.phi = std::numeric_limits<double>::denorm_min();
    s.saturated = true;
  }
  return s;
}

double PhaseMap::rate(const PhaseSample& s) const {
  return 2.0 * s.phi * s.complement / (mu_ + lambda_ * s.phi);
}

double time_of_phase(const PhaseMap& map, double phi) { return map.time_of_phase(phi); }

PhaseSample phase_of_time(const PhaseMap& map, double tau, double tol) {
  return map.phase_of_time(tau, tol);
}

// --- kinds ------------------------------------------------------------------

namespace {

struct KindName {
  PulseKind kind;
  std::string_view name;
};

constexpr std::array<KindName, 9> kKindNames = {{
    {PulseKind::heun_family, "heun_family"},
    {PulseKind::confluent_family, "confluent_family"},
    {PulseKind::sech, "sech"},
    {PulseKind::omega_delta, "omega_delta"},
    {PulseKind::omega_one, "omega_one"},
    {PulseKind::omega_plus, "omega_plus"},
    {PulseKind::omega_minus, "omega_minus"},
    {PulseKind::box, "box"},
    {PulseKind::smooth_box, "smooth_box"},
}};

}  // namespace

std::string_view to_string(PulseKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

std::optional<PulseKind> parse_pulse_kind(std::string_view name) {
  std::string normalized(name);
  std::replace(normalized.begin(), normalized.end(), '-', '_');
  for (const auto& k : kKindNames) {
    if (k.name == normalized) return k.kind;
  }
  return std::nullopt;
}

// --- pulse spec ---------------------------------------------------------------

PulseSpec PulseSpec::heun_family(HeunFamily family, DimensionlessParams params) {
  params.validate();
  if (!(family.c > 1.0)) throw DomainError("heun_family: c must be > 1");
  check_radicand("heun_family", [&](double phi) {
    return 4.0 * phi * (1.0 - phi) * (family.ab * phi - family.q) / (family.c - phi);
  });
  PulseSpec s(PulseKind::heun_family, params);
  s.payload_ = family;
  return s;
}

PulseSpec PulseSpec::confluent_family(ConfluentFamily family, DimensionlessParams params) {
  params.validate();
  check_radicand("confluent_family", [&](double phi) {
    return 4.0 * phi * (phi - 1.0) * (family.p * phi + family.q);
  });
  PulseSpec s(PulseKind::confluent_family, params);
  s.payload_ = family;
  return s;
}

PulseSpec PulseSpec::sech(DimensionlessParams params) {
  params.validate();
  return {PulseKind::sech, params};
}

PulseSpec PulseSpec::omega_delta(double delta, DimensionlessParams params) {
  params.validate();
  if (!(delta > 1.0) || !std::isfinite(delta)) {
    throw DomainError("omega_delta: delta must be > 1");
  }
  PulseSpec s(PulseKind::omega_delta, params);
  s.payload_ = delta;
  return s;
}

PulseSpec PulseSpec::smooth_box(double delta, DimensionlessParams params) {
  PulseSpec s = omega_delta(delta, params);
  s.kind_ = PulseKind::smooth_box;
  return s;
}

PulseSpec PulseSpec::omega_one(DimensionlessParams params) {
  params.validate();
  return {PulseKind::omega_one, params};
}

PulseSpec PulseSpec::omega_plus(DimensionlessParams params) {
  params.validate();
  return {PulseKind::omega_plus, params};
}

PulseSpec PulseSpec::omega_minus(DimensionlessParams params) {
  params.validate();
  return {PulseKind::omega_minus, params};
}

PulseSpec PulseSpec::box(double t0, DimensionlessParams params) {
  params.validate();
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("box: t0 must be > 0");
  PulseSpec s(PulseKind::box, params);
  s.payload_ = t0;
  return s;
}

PulseSpec PulseSpec::with_params(DimensionlessParams params) const {
  params.validate();
  PulseSpec s = *this;
  s.params_ = params;
  return s;
}

const HeunFamily& PulseSpec::heun() const {
  if (const auto* f = std::get_if<HeunFamily>(&payload_)) return *f;
  throw UnsupportedError("PulseSpec: not a Heun family pulse");
}

const ConfluentFamily& PulseSpec::confluent() const {
  if (const auto* f = std::get_if<ConfluentFamily>(&payload_)) return *f;
  throw UnsupportedError("PulseSpec: not a confluent family pulse");
}

double PulseSpec::delta() const {
  if (kind_ == PulseKind::omega_delta || kind_ == PulseKind::smooth_box) {
    return std::get<double>(payload_);
  }
  throw UnsupportedError("PulseSpec: delta is defined only for omega_delta / smooth_box");
}

double PulseSpec::box_duration() const {
  if (kind_ == PulseKind::box) return std::get<double>(payload_);
  throw UnsupportedError("PulseSpec: not a box pulse");
}

double PulseSpec::box_tau_end() const { return params_.alpha * box_duration(); }

PhaseMap PulseSpec::phase_map() const {
  if (const auto* f = std::get_if<HeunFamily>(&payload_)) return f->map;
  if (const auto* f = std::get_if<ConfluentFamily>(&payload_)) return f->map;
  return {};
}

double PulseSpec::omega(double tau) const {
  switch (kind_) {
    case PulseKind::heun_family:
      return omega_heun_family(heun(), tau);
    case PulseKind::confluent_family:
      return omega_confluent_family(confluent(), tau);
    default:
      return omega_named(*this, tau);
  }
}

std::vector<double> PulseSpec::breakpoints() const {
  if (kind_ == PulseKind::box) return {0.0, box_tau_end()};
  return {};
}

// --- envelopes ----------------------------------------------------------------

double omega_heun_family(const HeunFamily& f, double tau) {
  const PhaseSample s = f.map.phase_of_time(tau);
  if (s.saturated) return 0.0;
  const double r = 4.0 * s.phi * s.complement * (f.ab * s.phi - f.q) / (f.c - s.phi);
  const double rad = clamp_radicand(r, std::abs(f.ab) + std::abs(f.q), "omega_heun_family");
  return std::sqrt(rad) / (f.map.mu() + f.map.lambda() * s.phi);
}

double omega_confluent_family(const ConfluentFamily& f, double tau) {
  const PhaseSample s = f.map.phase_of_time(tau);
  if (s.saturated) return 0.0;
  const double r = -4.0 * s.phi * s.complement * (f.p * s.phi + f.q);
  const double rad =
      clamp_radicand(r, std::abs(f.p) + std::abs(f.q), "omega_confluent_family");
  return std::sqrt(rad) / (f.map.mu() + f.map.lambda() * s.phi);
}

double omega_named(const PulseSpec& spec, double tau) {
  const double g = spec.params().gamma;
  switch (spec.kind()) {
    case PulseKind::sech:
      return g * sech(tau);
    case PulseKind::omega_delta:
    case PulseKind::smooth_box: {
      // delta - tanh = (delta - 1) + (1 - tanh), kept accurate near delta -> 1.
      const double denom = (spec.delta() - 1.0) + one_minus_tanh(tau);
      return g * sech(tau) / std::sqrt(denom);
    }
    case PulseKind::omega_one:
      return g * std::sqrt(one_plus_tanh(tau));
    case PulseKind::omega_plus:
      return g * sech(tau) * std::sqrt(one_plus_tanh(tau));
    case PulseKind::omega_minus:
      return g * sech(tau) * std::sqrt(one_minus_tanh(tau));
    case PulseKind::box:
      return (tau > 0.0 && tau < spec.box_tau_end()) ? g : 0.0;
    default:
      throw UnsupportedError("omega_named: not a named pulse");
  }
}

double pulse_area(const PulseSpec& spec, double tau_min, double tau_max, double tol) {
  if (!(tau_min < tau_max)) throw DomainError("pulse_area: need tau_min < tau_max");
  if (!(tol > 0.0)) throw DomainError("pulse_area: tol must be positive");

  std::vector<double> cuts{tau_min};
  for (double b : spec.breakpoints()) {
    if (b > tau_min && b < tau_max) cuts.push_back(b);
  }
  // A finite interior point keeps semi-infinite pieces well conditioned.
  if (std::isinf(tau_min) && std::isinf(tau_max) && cuts.size() == 1) cuts.push_back(0.0);
  cuts.push_back(tau_max);

  auto f = [&](double t) { return spec.omega(t); };
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    const double piece = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, cuts[i], cuts[i + 1], 25, tol, &err);
    total += piece;
    total_err += err;
  }
  if (!std::isfinite(total) || total_err > 100.0 * tol * std::max(std::abs(total), 1e-300)) {
    std::ostringstream os;
    os << "pulse_area: quadrature did not converge (best estimate " << total
       << ", error estimate " << total_err << ")";
    throw ConvergenceError(os.str(), total_err);
  }
  return total;
}

// --- ODE parameter maps ---------------------------------------------------------

OdeParams heun_params_for(const PulseSpec& spec) {
  const double beta = spec.params().beta;
  const double gamma = spec.params().gamma;
  switch (spec.kind()) {
    case PulseKind::heun_family: {
      const HeunFamily& f = spec.heun();
      if (f.ab != 0.0) {
        throw UnsupportedError(
            "heun_params_for: ab != 0 adds an extra singular point; only ab = 0 maps to "
            "the Heun form");
      }
      const double mu = f.map.mu(), lam = f.map.lambda();
      const cplx u = 0.5 - kI * beta * mu / 2.0;
      const cplx v = 0.5 + kI * beta * (lam + mu) / 2.0;
      const cplx w = 0.5;
      // a = 0; b follows from the Fuchs relation.
      return specfun::HeunParams(0.0, u + v + w - 1.0, f.c, f.q, u, v, w);
    }
    case PulseKind::omega_delta:
    case PulseKind::smooth_box: {
      const cplx u = 0.5 - kI * beta / 2.0;
      const cplx v = 0.5 + kI * beta / 2.0;
      return specfun::HeunParams(0.0, 0.5, (spec.delta() + 1.0) / 2.0, -gamma * gamma / 2.0,
                                 u, v, 0.5);
    }
    case PulseKind::omega_one: {
      // q / (phi (phi-1)^2) with q = gamma^2 / 2 is the c = 1 Heun form with
      // ab = 0 and accessory parameter -q.
      const cplx u = 0.5 - kI * beta / 2.0;
      const cplx v = 1.0 + kI * beta / 2.0;
      return specfun::HeunParams(0.0, u + v - 1.0, 1.0, -gamma * gamma / 2.0, u, v, 0.0);
    }
    case PulseKind::sech: {
      // Gauss limit c = 0, q = 0: F[gamma, -gamma; r; phi], r = 1/2 - i beta / 2.
      const cplx r = 0.5 - kI * beta / 2.0;
      const cplx v = 0.5 + kI * beta / 2.0;
      return specfun::HeunParams(gamma, -gamma, 0.0, 0.0, r, v, 0.0);
    }
    case PulseKind::omega_plus: {
      // sigma / (phi - 1) with sigma = -2 gamma^2  ->  p = sigma, q = 0.
      return specfun::ConfluentHeunParams{-kI * beta / 2.0, 0.5 + kI * beta / 2.0,
                                          -2.0 * gamma * gamma, 0.0};
    }
    case PulseKind::omega_minus: {
      // eta / phi with eta = 2 gamma^2  ->  p = eta, q = -eta.
      const double eta = 2.0 * gamma * gamma;
      return specfun::ConfluentHeunParams{0.5 - kI * beta / 2.0, kI * beta / 2.0, eta, -eta};
    }
    case PulseKind::confluent_family: {
      const ConfluentFamily& f = spec.confluent();
      const double mu = f.map.mu(), lam = f.map.lambda();
      const cplx u_half = 0.5 - kI * beta * mu / 2.0;
      if (f.p == 0.0) {
        return specfun::ConfluentHeunParams{u_half, 0.5 + kI * beta * (lam + mu) / 2.0, 0.0,
                                            f.q};
      }
      if (f.p == -f.q) {
        return specfun::ConfluentHeunParams{u_half, kI * beta * (lam + mu) / 2.0, f.p, f.q};
      }
      if (f.q == 0.0) {
        return specfun::ConfluentHeunParams{-kI * beta * mu / 2.0,
                                            0.5 + kI * beta * (lam + mu) / 2.0, f.p, 0.0};
      }
      throw UnsupportedError(
          "heun_params_for: confluent family needs p = -q, p = 0 or q = 0");
    }
    case PulseKind::box:
      throw UnsupportedError(
          "heun_params_for: the box pulse has an elementary closed-form solution instead");
  }
  throw UnsupportedError("heun_params_for: unknown pulse kind");
}

}  // namespace heunpulse::pulses
