#include "heunpulse/xuv.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "heunpulse/errors.hpp"
#include "heunpulse/specfun.hpp"
#include "heunpulse/units.hpp"

namespace heunpulse::xuv {

namespace {

namespace u = units;
using u::constants::c;
using u::constants::epsilon0;
using u::constants::hbar;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string("MediumParams: ") + name + " must be positive and finite");
  }
}

// Gauss-Kronrod over [a, b] split at decades of tau so the algebraic tails of
// the Bessel integrands are resolved.
template <class F>
double integrate_decades(F&& f, double a, double b, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  double lo = a;
  double hi = std::min(b, 1.0);
  while (lo < b) {
    double err = 0.0;
    total += gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, tol, &err);
    lo = hi;
    hi = std::min(b, hi * 10.0);
  }
  return total;
}

}  // namespace

void MediumParams::validate() const {
  require_positive(number_density, "number_density");
  require_positive(dipole_ab, "dipole_ab");
  require_positive(length, "length");
  require_positive(wavelength4, "wavelength4");
  require_positive(omega3_tau, "omega3_tau");
  require_positive(pump_duration, "pump_duration");
  require_positive(cross_section, "cross_section");
  if (!(rho_cb >= 0.0 && rho_cb <= 0.5)) throw DomainError("MediumParams: rho_cb must lie in [0, 0.5]");
  if (!(rho_aa0 >= 0.0 && rho_aa0 <= 1.0)) {
    throw DomainError("MediumParams: rho_aa0 must lie in [0, 1]");
  }
  if (!(beam_area >= 0.0) || !std::isfinite(beam_area)) {
    throw DomainError("MediumParams: beam_area must be >= 0 (0 selects L^2)");
  }
}

double coherence_lifetime(const MediumParams& m) {
  m.validate();
  const u::Area sigma = u::from_cm2(m.cross_section);
  const u::Density n = u::from_per_cm3(m.number_density);
  const u::Time t = u::Dimensionless(1.0) / (sigma * c * n);
  return t.value;
}

XuvEstimate signal_rabi(const MediumParams& m) {
  m.validate();
  const u::Wavenumber k4 = u::Dimensionless(2.0 * std::numbers::pi) / u::from_cm(m.wavelength4);
  const u::Length len = u::from_cm(m.length);
  const u::Dipole p = u::from_debye(m.dipole_ab);
  const u::Density n = u::from_per_cm3(m.number_density);
  const auto p2_gaussian = p * p / (4.0 * std::numbers::pi * epsilon0);
  const u::Rate omega4 =
      k4 * len * p2_gaussian * n / (2.0 * hbar) * (m.rho_cb * m.omega3_tau);

  const u::ElectricField field = hbar * omega4 / p;
  const u::Intensity intensity = 0.5 * c * epsilon0 * field * field;
  const u::Energy energy =
      intensity * u::from_cm2(m.effective_area()) * u::Time(m.pump_duration);

  XuvEstimate e;
  e.omega4 = omega4.value;
  e.field = field.value;
  e.intensity = intensity.value;
  e.pulse_energy = energy.value;
  e.coherence_lifetime = coherence_lifetime(m);
  return e;
}

EnergyBracket scan_energy(const MediumParams& base, double density_lo, double density_hi,
                          double omega3_tau_lo, double omega3_tau_hi, std::size_t n_points) {
  if (n_points < 2) throw DomainError("scan_energy: need at least 2 points per axis");
  if (!(density_lo > 0.0 && density_lo <= density_hi && omega3_tau_lo > 0.0 &&
        omega3_tau_lo <= omega3_tau_hi)) {
    throw DomainError("scan_energy: ranges must be positive and ordered");
  }
  auto log_point = [n_points](double lo, double hi, std::size_t i) {
    if (i + 1 == n_points) return hi;
    const double f = static_cast<double>(i) / static_cast<double>(n_points - 1);
    return lo * std::pow(hi / lo, f);
  };
  EnergyBracket b;
  b.min_energy = std::numeric_limits<double>::infinity();
  b.max_energy = -1.0;
  for (std::size_t i = 0; i < n_points; ++i) {
    for (std::size_t j = 0; j < n_points; ++j) {
      MediumParams m = base;
      m.number_density = log_point(density_lo, density_hi, i);
      m.omega3_tau = log_point(omega3_tau_lo, omega3_tau_hi, j);
      const double e = signal_rabi(m).pulse_energy;
      if (e < b.min_energy) {
        b.min_energy = e;
        b.density_at_min = m.number_density;
        b.omega3_tau_at_min = m.omega3_tau;
      }
      if (e > b.max_energy) {
        b.max_energy = e;
        b.density_at_max = m.number_density;
        b.omega3_tau_at_max = m.omega3_tau;
      }
      ++b.points;
    }
  }
  return b;
}

MediumParams estimate_preset() {
  MediumParams m;
  m.number_density = 1e17;
  m.dipole_ab = 1.0;
  m.length = 1e-2;
  m.wavelength4 = 1e-6;
  m.rho_cb = 0.1;
  m.omega3_tau = 1.0;
  m.pump_duration = 1e-12;
  m.cross_section = 1e-15;
  m.rho_aa0 = 0.01;
  return m;
}

double tipping_angle(double rho_aa0) {
  if (!(rho_aa0 >= 0.0 && rho_aa0 <= 1.0)) {
    throw DomainError("tipping_angle: rho_aa0 must lie in [0, 1]");
  }
  return 2.0 * std::sqrt(rho_aa0);
}

void EmissionSolution::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw DomainError("EmissionSolution: eta must be > 0");
  if (!std::isfinite(phi0)) throw DomainError("EmissionSolution: phi0 must be finite");
}

namespace {

void require_quadrant(double z, double tau) {
  if (!(z >= 0.0 && tau >= 0.0) || !std::isfinite(z) || !std::isfinite(tau)) {
    throw DomainError("emission profile: needs finite z >= 0 and tau >= 0");
  }
}

}  // namespace

double theta_profile(const EmissionSolution& sol, double z, double tau) {
  sol.validate();
  require_quadrant(z, tau);
  const double s = 2.0 * std::sqrt(sol.eta * z * tau);
  return sol.phi0 * (1.0 - specfun::bessel_j(0, s));
}

double rabi_profile(const EmissionSolution& sol, double z, double tau) {
  sol.validate();
  require_quadrant(z, tau);
  const double s = 2.0 * std::sqrt(sol.eta * z * tau);
  return 2.0 * sol.phi0 * sol.eta * z * specfun::bessel_j1_over_x(s);
}

double coupling_profile(const EmissionSolution& sol, double z, double tau) {
  return 0.5 * rabi_profile(sol, z, tau);
}

double coupling_integral(const EmissionSolution& sol, double z, double tau_max, double tol) {
  require_quadrant(z, tau_max);
  return integrate_decades([&](double t) { return coupling_profile(sol, z, t); }, 0.0, tau_max,
                           tol);
}

double normalized_fluence(const EmissionSolution& sol, double z, double tau_max) {
  require_quadrant(z, tau_max);
  if (z == 0.0) throw DomainError("normalized_fluence: z must be > 0");
  const double f = integrate_decades(
      [&](double t) {
        const double om = rabi_profile(sol, z, t);
        return om * om;
      },
      0.0, tau_max, 1e-10);
  return f / (sol.eta * z);
}

namespace {

template <class Source>
double mixed_residual(const EmissionSolution& sol, double z, double tau, double h,
                      Source&& source) {
  if (!(h > 0.0) || z - h < 0.0 || tau - h < 0.0) {
    throw DomainError("residual: need h > 0 with z - h >= 0 and tau - h >= 0");
  }
  const double d2 = (theta_profile(sol, z + h, tau + h) - theta_profile(sol, z + h, tau - h) -
                     theta_profile(sol, z - h, tau + h) + theta_profile(sol, z - h, tau - h)) /
                    (4.0 * h * h);
  return d2 + sol.eta * source(theta_profile(sol, z, tau) - sol.phi0);
}

}  // namespace

double linearized_residual(const EmissionSolution& sol, double z, double tau, double h) {
  return mixed_residual(sol, z, tau, h, [](double x) { return x; });
}

double sine_gordon_residual(const EmissionSolution& sol, double z, double tau, double h) {
  return mixed_residual(sol, z, tau, h, [](double x) { return std::sin(x); });
}

std::vector<ProfileSample> emission_grid(const EmissionSolution& sol, double z_max,
                                         double tau_max, std::size_t nz, std::size_t ntau) {
  if (nz < 2 || ntau < 2) throw DomainError("emission_grid: need at least 2 points per axis");
  require_quadrant(z_max, tau_max);
  std::vector<ProfileSample> out;
  out.reserve(nz * ntau);
  for (std::size_t i = 0; i < nz; ++i) {
    const double z = z_max * static_cast<double>(i) / static_cast<double>(nz - 1);
    for (std::size_t j = 0; j < ntau; ++j) {
      const double t = tau_max * static_cast<double>(j) / static_cast<double>(ntau - 1);
      out.push_back({z, t, theta_profile(sol, z, t), rabi_profile(sol, z, t)});
    }
  }
  return out;
}

double pulse_duration(const MediumParams& m, double z, double gamma_r) {
  m.validate();
  require_positive(z, "z");
  require_positive(gamma_r, "gamma_r");
  const u::Density n = u::from_per_cm3(m.number_density);
  const u::Length lambda = u::from_cm(m.wavelength4);
  const u::Time t = u::Dimensionless(4.0 * std::numbers::pi) /
                    (3.0 * n * lambda * lambda * u::from_cm(z) * u::Rate(gamma_r));
  return t.value;
}

PowerEnergy pulse_power_and_energy(const MediumParams& m, double z, double gamma_r, double area,
                                   double omega_ab) {
  m.validate();
  require_positive(area, "area");
  require_positive(omega_ab, "omega_ab");
  const u::Energy stored = u::from_cm2(area) * u::from_cm(z) *
                           u::from_per_cm3(m.number_density) * m.rho_aa0 * hbar *
                           u::Rate(omega_ab);
  const u::Time duration(pulse_duration(m, z, gamma_r));
  const u::Power power = stored / duration;
  return {power.value, stored.value};
}

double angular_frequency_of_wavelength(double wavelength_cm) {
  require_positive(wavelength_cm, "wavelength");
  const u::Rate w = u::Dimensionless(2.0 * std::numbers::pi) * c / u::from_cm(wavelength_cm);
  return w.value;
}

}  // namespace heunpulse::xuv
