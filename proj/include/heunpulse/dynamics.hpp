#pragma once

// Two-level amplitude dynamics in the rotating-wave approximation,
//   dCa/dtau = i Omega(tau) e^{ i beta tau} Cb,
//   dCb/dtau = i Omega(tau) e^{-i beta tau} Ca,
// integrated numerically and evaluated from the exact Heun-type solutions.

#include <complex>
#include <cstddef>
#include <vector>

#include "heunpulse/ode.hpp"
#include "heunpulse/pulses.hpp"

namespace heunpulse::dynamics {

using cplx = std::complex<double>;

struct AmplitudeState {
  cplx ca{0.0, 0.0};
  cplx cb{1.0, 0.0};

  double pa() const { return std::norm(ca); }
  double pb() const { return std::norm(cb); }
  double norm_defect() const { return pa() + pb() - 1.0; }
};

struct IntegratorConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double tau_min = -20.0;
  double tau_max = 20.0;
  std::size_t max_steps = 5'000'000;
  std::size_t sample_count = 401;

  /// Tolerances in [1e-14, 1e-3], tau_min < tau_max, sample_count >= 2.
  void validate() const;
};

struct TrajectorySample {
  double tau;
  AmplitudeState state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  pulses::PulseSpec spec;
  IntegratorConfig config;
  ode::Stats stats;

  /// max over samples of | |Ca|^2 + |Cb|^2 - 1 |.
  double max_norm_defect() const;
  const AmplitudeState& final_state() const { return samples.back().state; }
};

/// Uniform sample grid of `config`.
std::vector<double> sample_grid(const IntegratorConfig& config);

/// Adaptive Dormand-Prince integration from (Ca, Cb) = (0, 1) at tau_min.
/// Samples are taken on the uniform grid of `config`.
Trajectory evolve_numeric(const pulses::PulseSpec& spec, const IntegratorConfig& config);

/// Same, sampled at explicit abscissae (sorted, all >= config.tau_min). The
/// integration still starts at config.tau_min.
Trajectory evolve_numeric(const pulses::PulseSpec& spec, const IntegratorConfig& config,
                          const std::vector<double>& taus);

struct RiccatiSample {
  double tau;
  double abs_ca;
};

/// |Ca| from the Riccati variable f = Ca/Cb (switching to g = 1/f whenever
/// |f| > 10), started from f = 0 at tau_min.
std::vector<RiccatiSample> evolve_riccati(const pulses::PulseSpec& spec,
                                          const IntegratorConfig& config);

// --- exact solutions ----------------------------------------------------------

struct AnalyticSample {
  double tau;
  cplx ca;
  /// Cb recovered from dCa/dtau = i Omega e^{i beta tau} Cb (NaN where Omega = 0).
  cplx cb;
};

/// Exact Ca(tau) on a grid for every exactly solvable kind (Heun family with
/// ab = 0, confluent family, sech, omega_delta/smooth_box, omega_one,
/// omega_plus, omega_minus, box).
std::vector<AnalyticSample> analytic_trajectory(const pulses::PulseSpec& spec,
                                                const std::vector<double>& taus);

/// Prefactor of the branch that vanishes as tau -> -infinity, fixed by
/// matching Ca ~ i int Omega e^{i beta tau} for Omega ~ K e^{kappa tau}.
cplx leading_prefactor(double k, double kappa, double beta);

cplx analytic_omega_delta(double delta, const pulses::DimensionlessParams& params, double tau);
cplx analytic_omega_one(const pulses::DimensionlessParams& params, double tau);
/// sign = +1 for Omega_+, -1 for Omega_-.
cplx analytic_omega_pm(int sign, const pulses::DimensionlessParams& params, double tau);
/// Physical-time box solution, valid for 0 <= t < t0.
cplx analytic_box(double delta_abs, double omega0, double t0, double t);

/// The printed solution constants, kept for cross-checking the recomputed
/// prefactors (their sign conventions differ for omega_delta and omega_plus).
cplx printed_prefactor_omega_one(const pulses::DimensionlessParams& params);

/// Exponent xi of the (phi - 1)^xi factor of the omega_one solution.
cplx omega_one_xi(const pulses::DimensionlessParams& params);

/// p = sin^2(A/2), where A = int Omega_R dt is the area of the full Rabi
/// frequency (twice the coupling Omega entering the amplitude equations).
double resonant_probability(double area);

/// |Ca|^2 for tau -> +infinity from the exact solution.
double final_population(const pulses::PulseSpec& spec);

/// Final |Ca|^2 of the numeric integration over config's span.
double final_population_numeric(const pulses::PulseSpec& spec, const IntegratorConfig& config);

}  // namespace heunpulse::dynamics
