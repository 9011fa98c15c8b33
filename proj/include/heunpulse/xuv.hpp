#pragma once

// XUV signal estimate for a Raman-coherence scheme and the coherent emission
// of a two-level medium with a small initial tipping angle.
//
// Inputs use practical units (cm^-3, Debye, cm, s); everything is converted to
// SI internally and reported in J, W and s.

#include <cstddef>
#include <string>
#include <vector>

namespace heunpulse::xuv {

struct MediumParams {
  double number_density = 1e17;  // cm^-3
  double dipole_ab = 1.0;        // Debye
  double length = 1e-2;          // cm (active medium length L)
  double wavelength4 = 1e-6;     // cm (signal wavelength)
  double rho_cb = 0.1;           // initial Raman coherence
  double omega3_tau = 1.0;       // probe Rabi frequency times pump duration
  double pump_duration = 1e-12;  // s
  double cross_section = 1e-15;  // cm^2, collisional dephasing
  double rho_aa0 = 0.01;         // initial excited population
  /// Beam cross-section in cm^2; 0 selects L^2.
  double beam_area = 0.0;

  /// All positive (rho_cb, rho_aa0 may be 0), rho_cb <= 0.5, rho_aa0 <= 1.
  void validate() const;
  double effective_area() const { return beam_area > 0.0 ? beam_area : length * length; }
};

struct XuvEstimate {
  double omega4 = 0.0;              // rad/s
  double field = 0.0;               // V/m
  double intensity = 0.0;           // W/m^2
  double pulse_energy = 0.0;        // J
  double coherence_lifetime = 0.0;  // s
};

/// Omega4 = k4 L p^2 N rho_cb (Omega3 tau) / (2 hbar) in Gaussian units, i.e.
/// with p^2 -> p^2 / (4 pi eps0) in SI. The field E = hbar Omega4 / p is
/// turned into an energy I A tau with I = c eps0 E^2 / 2. The lifetime is
/// 1 / (sigma c N).
XuvEstimate signal_rabi(const MediumParams& m);

double coherence_lifetime(const MediumParams& m);

struct EnergyBracket {
  double min_energy = 0.0;  // J
  double max_energy = 0.0;  // J
  double density_at_min = 0.0, omega3_tau_at_min = 0.0;
  double density_at_max = 0.0, omega3_tau_at_max = 0.0;
  std::size_t points = 0;
};

/// Scans number density and Omega3 tau log-uniformly over the closed ranges
/// (n_points each) and reports the extremes of the pulse energy.
EnergyBracket scan_energy(const MediumParams& base, double density_lo, double density_hi,
                          double omega3_tau_lo, double omega3_tau_hi, std::size_t n_points = 31);

/// The parameter regime of the estimate: p = 1 D, L = 100 um, rho_cb = 0.1,
/// tau = 1 ps, lambda = 10 nm, N = 1e17 cm^-3 (scanned over 1e16..1e19) and
/// Omega3 tau = 1 (scanned over 1..1e3).
MediumParams estimate_preset();
inline constexpr double kPresetDensityLo = 1e16, kPresetDensityHi = 1e19;
inline constexpr double kPresetOmega3TauLo = 1.0, kPresetOmega3TauHi = 1e3;

// --- coherent emission ------------------------------------------------------

/// phi = 2 sqrt(rho_aa0).
double tipping_angle(double rho_aa0);

struct EmissionSolution {
  /// Coupling eta, in units where eta z tau is dimensionless.
  double eta = 1.0;
  double phi0 = 0.2;

  void validate() const;
};

/// theta = phi [1 - J0(2 sqrt(eta z tau))].
double theta_profile(const EmissionSolution& sol, double z, double tau);

/// Full Rabi frequency phi J1(s) sqrt(eta z / tau), s = 2 sqrt(eta z tau),
/// evaluated as 2 phi eta z J1(s)/s so that tau = 0 gives phi eta z.
/// d theta / d tau equals this quantity.
double rabi_profile(const EmissionSolution& sol, double z, double tau);

/// Half of rabi_profile: the coupling of the amplitude equations, for which
/// theta = 2 int Omega dtau.
double coupling_profile(const EmissionSolution& sol, double z, double tau);

/// int_0^T coupling_profile dtau by adaptive quadrature.
double coupling_integral(const EmissionSolution& sol, double z, double tau_max,
                         double tol = 1e-12);

/// int_0^T rabi_profile^2 dtau, normalized by eta z (-> phi^2 as T -> inf).
double normalized_fluence(const EmissionSolution& sol, double z, double tau_max);

/// d^2 theta / dz dtau + eta (theta - phi) by central differences of step h.
double linearized_residual(const EmissionSolution& sol, double z, double tau, double h);

/// Same with sin(theta - phi) in place of (theta - phi); reported only.
double sine_gordon_residual(const EmissionSolution& sol, double z, double tau, double h);

struct ProfileSample {
  double z, tau, theta, omega;
};

/// theta and rabi_profile on a (z, tau) grid, row-major in z.
std::vector<ProfileSample> emission_grid(const EmissionSolution& sol, double z_max,
                                         double tau_max, std::size_t nz, std::size_t ntau);

/// Radiative decay rate of the hydrogen 2p level (lifetime 1.596 ns), s^-1.
inline constexpr double kHydrogen2pDecayRate = 1.0 / 1.596e-9;

/// tau_pulse = 4 pi / (3 N lambda^2 z gamma_r), with lambda = wavelength4.
/// z in cm, gamma_r in s^-1; returns seconds.
double pulse_duration(const MediumParams& m, double z, double gamma_r);

struct PowerEnergy {
  double power = 0.0;   // W
  double energy = 0.0;  // J
};

/// Stored energy A z N rho_aa0 hbar omega_ab released in tau_pulse, so that
/// power * tau_pulse == energy. area in cm^2, z in cm, omega_ab in rad/s.
PowerEnergy pulse_power_and_energy(const MediumParams& m, double z, double gamma_r,
                                   double area, double omega_ab);

/// Angular frequency 2 pi c / lambda for a wavelength in cm.
double angular_frequency_of_wavelength(double wavelength_cm);

}  // namespace heunpulse::xuv
