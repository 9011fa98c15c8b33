#pragma once

// Exactly solvable pulse envelopes and the monotone time <-> phase map
//   2 tau = ln[ phi^mu / (1 - phi)^(mu + lambda) ],  phi in (0, 1).

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "heunpulse/specfun.hpp"

namespace heunpulse::pulses {

/// tau = alpha t, beta = Delta / alpha, gamma = Omega0 / alpha.
struct DimensionlessParams {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;

  /// Throws DomainError unless alpha > 0, gamma >= 0 and all finite.
  void validate() const;

  /// Converts inputs (Omega0, alpha, Delta in units of a common
  /// reference frequency) into the dimensionless set.
  static DimensionlessParams from_physical(double omega0, double alpha, double detuning);
};

struct PhaseSample {
  double phi = 0.5;
  /// 1 - phi, computed without cancellation.
  double complement = 0.5;
  /// phi or 1 - phi underflowed (clamped to the smallest subnormal).
  bool saturated = false;
};

class PhaseMap {
 public:
  PhaseMap() = default;
  /// Requires mu > 0 and lambda / mu > -1.
  PhaseMap(double mu, double lambda);

  double mu() const { return mu_; }
  double lambda() const { return lambda_; }

  double time_of_phase(double phi) const;
  PhaseSample phase_of_time(double tau, double tol = 1e-13) const;
  /// d phi / d tau = 2 phi (1 - phi) / (mu + lambda phi).
  double rate(const PhaseSample& s) const;

 private:
  double mu_ = 1.0;
  double lambda_ = 0.0;
};

enum class PulseKind {
  heun_family,
  confluent_family,
  sech,
  omega_delta,
  omega_one,
  omega_plus,
  omega_minus,
  box,
  smooth_box,
};

std::string_view to_string(PulseKind kind);
/// Accepts both `omega_delta` and `omega-delta` spellings.
std::optional<PulseKind> parse_pulse_kind(std::string_view name);

struct HeunFamily {
  double ab = 0.0;
  double q = 0.0;
  double c = 2.0;
  PhaseMap map;
};

struct ConfluentFamily {
  double p = 0.0;
  double q = 0.0;
  PhaseMap map;
};

/// Immutable description of an envelope Omega(tau) (in units of alpha).
class PulseSpec {
 public:
  static PulseSpec heun_family(HeunFamily family, DimensionlessParams params);
  static PulseSpec confluent_family(ConfluentFamily family, DimensionlessParams params);
  static PulseSpec sech(DimensionlessParams params);
  static PulseSpec omega_delta(double delta, DimensionlessParams params);
  static PulseSpec omega_one(DimensionlessParams params);
  static PulseSpec omega_plus(DimensionlessParams params);
  static PulseSpec omega_minus(DimensionlessParams params);
  /// Box of duration t0 in physical time; converted with tau = alpha t.
  static PulseSpec box(double t0, DimensionlessParams params);
  static PulseSpec smooth_box(double delta, DimensionlessParams params);

  PulseKind kind() const { return kind_; }
  const DimensionlessParams& params() const { return params_; }
  PulseSpec with_params(DimensionlessParams params) const;

  /// Family payloads; throw UnsupportedError for other kinds.
  const HeunFamily& heun() const;
  const ConfluentFamily& confluent() const;
  double delta() const;
  double box_duration() const;  // physical t0
  double box_tau_end() const;   // alpha t0

  /// Phase map underlying the pulse (mu = 1, lambda = 0 for the named shapes).
  PhaseMap phase_map() const;

  double omega(double tau) const;

  /// Discontinuities of Omega(tau) (box edges); empty for smooth pulses.
  std::vector<double> breakpoints() const;

  /// True when Omega -> 0 as tau -> +infinity.
  bool vanishes_at_late_times() const { return kind_ != PulseKind::omega_one; }

 private:
  PulseSpec(PulseKind kind, DimensionlessParams params) : kind_(kind), params_(params) {}

  PulseKind kind_;
  DimensionlessParams params_;
  std::variant<std::monostate, HeunFamily, ConfluentFamily, double> payload_;
};

double time_of_phase(const PhaseMap& map, double phi);
PhaseSample phase_of_time(const PhaseMap& map, double tau, double tol = 1e-13);

/// Omega = sqrt[4 phi (1-phi)(ab phi - q)/(c - phi)] / (mu + lambda phi).
double omega_heun_family(const HeunFamily& family, double tau);
/// Omega = sqrt[4 phi (phi-1)(p phi + q)] / (mu + lambda phi).
double omega_confluent_family(const ConfluentFamily& family, double tau);
/// Closed forms of the named shapes.
double omega_named(const PulseSpec& spec, double tau);

/// Integral of Omega over [tau_min, tau_max] (infinite limits allowed) by
/// adaptive Gauss-Kronrod quadrature.
double pulse_area(const PulseSpec& spec, double tau_min, double tau_max, double tol = 1e-12);

using OdeParams = std::variant<specfun::HeunParams, specfun::ConfluentHeunParams>;

/// ODE parameter set obtained in the phase variable for an exactly solvable
/// pulse. Omega_1 maps to the Heun form with c = 1 and the sech pulse to its
/// c = 0, q = 0 Gauss limit.
OdeParams heun_params_for(const PulseSpec& spec);

}  // namespace heunpulse::pulses
