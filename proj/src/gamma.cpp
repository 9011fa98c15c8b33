#include <array>
#include <cmath>
#include <numbers>

#include "heunpulse/errors.hpp"
#include "heunpulse/specfun.hpp"

namespace heunpulse::specfun {

namespace {

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos_log_gamma(cplx z) {
  // Valid for Re(z) >= 0.5.
  const cplx zm = z - 1.0;
  cplx series = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) {
    series += kLanczos[k] / (zm + static_cast<double>(k));
  }
  const cplx t = zm + kLanczosG + 0.5;
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return half_log_2pi + (zm + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    throw PoleError("log_gamma: pole at a non-positive integer");
  }
  if (z.real() >= 0.5) return lanczos_log_gamma(z);

  // Shift into the Lanczos half plane: log G(z) = log G(z+n) - sum log(z+k).
  // Summing principal logs keeps the result on the principal branch.
  const int n = static_cast<int>(std::ceil(0.5 - z.real()));
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::log(z + static_cast<double>(k));
  return lanczos_log_gamma(z + static_cast<double>(n)) - acc;
}

}  // namespace heunpulse::specfun
