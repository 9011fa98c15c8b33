#include <cmath>
#include <numbers>
#include <vector>

#include "heunpulse/errors.hpp"
#include "heunpulse/specfun.hpp"

namespace heunpulse::specfun {

namespace {

constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 30.0;

// sum_k (-1)^k (x/2)^(2k) / (k! (k+n)!) ; J_n(x) = (x/2)^n times this.
double reduced_series(int n, double x) {
  const double y = -0.25 * x * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term /= k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalized by J0 + 2 sum J_2k = 1.
void miller(double x, double& j0, double& j1) {
  int start = static_cast<int>(x + 30.0 + 4.0 * std::sqrt(x));
  if (start % 2) ++start;
  double next = 0.0;     // J_{k+1}
  double cur = 1e-300;   // J_k
  double norm = 0.0;
  double v0 = 0.0, v1 = 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      v1 *= 1e-250;
    }
    if (k - 1 == 1) v1 = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  v0 = cur;
  norm += v0;
  j0 = v0 / norm;
  j1 = v1 / norm;
}

// Hankel asymptotic expansion.
double asymptotic(int n, double x) {
  const double mu = 4.0 * n * n;
  const double ex = 8.0 * x;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev_mag = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * ex);
    const double mag = std::abs(term);
    if (mag > prev_mag) break;
    prev_mag = mag;
    // Terms alternate between Q (odd k) and P (even k) with sign pattern
    // +Q, -P, -Q, +P, ...
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (mag < 1e-17) break;
  }
  const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) throw DomainError("bessel_j: order must be 0 or 1");
  if (!(x >= 0.0)) throw DomainError("bessel_j: x must be non-negative");
  if (x <= kSeriesLimit) {
    const double r = reduced_series(order, x);
    return order == 0 ? r : 0.5 * x * r;
  }
  if (x < kAsymptoticLimit) {
    double j0, j1;
    miller(x, j0, j1);
    return order == 0 ? j0 : j1;
  }
  return asymptotic(order, x);
}

double bessel_j1_over_x(double x) {
  if (!(x >= 0.0)) throw DomainError("bessel_j1_over_x: x must be non-negative");
  if (x <= kSeriesLimit) return 0.5 * reduced_series(1, x);
  return bessel_j(1, x) / x;
}

}  // namespace heunpulse::specfun
