#pragma once

// Compile-time dimension tags for SI quantities. Exponents are carried for
// length (m), mass (kg), time (s) and charge (C); mixing incompatible
// quantities fails to compile.

#include <cmath>

namespace heunpulse::units {

template <int L, int M, int T, int Q>
struct Quantity {
  double value = 0.0;

  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value(v) {}

  constexpr Quantity operator+(Quantity o) const { return Quantity(value + o.value); }
  constexpr Quantity operator-(Quantity o) const { return Quantity(value - o.value); }
  constexpr Quantity operator*(double s) const { return Quantity(value * s); }
  constexpr Quantity operator/(double s) const { return Quantity(value / s); }
  constexpr bool operator<(Quantity o) const { return value < o.value; }
};

template <int L1, int M1, int T1, int Q1, int L2, int M2, int T2, int Q2>
constexpr Quantity<L1 + L2, M1 + M2, T1 + T2, Q1 + Q2> operator*(Quantity<L1, M1, T1, Q1> a,
                                                                 Quantity<L2, M2, T2, Q2> b) {
  return Quantity<L1 + L2, M1 + M2, T1 + T2, Q1 + Q2>(a.value * b.value);
}

template <int L1, int M1, int T1, int Q1, int L2, int M2, int T2, int Q2>
constexpr Quantity<L1 - L2, M1 - M2, T1 - T2, Q1 - Q2> operator/(Quantity<L1, M1, T1, Q1> a,
                                                                 Quantity<L2, M2, T2, Q2> b) {
  return Quantity<L1 - L2, M1 - M2, T1 - T2, Q1 - Q2>(a.value / b.value);
}

template <int L, int M, int T, int Q>
constexpr Quantity<L, M, T, Q> operator*(double s, Quantity<L, M, T, Q> a) {
  return Quantity<L, M, T, Q>(s * a.value);
}

using Dimensionless = Quantity<0, 0, 0, 0>;
using Length = Quantity<1, 0, 0, 0>;
using Area = Quantity<2, 0, 0, 0>;
using Density = Quantity<-3, 0, 0, 0>;
using Time = Quantity<0, 0, 1, 0>;
using Rate = Quantity<0, 0, -1, 0>;
using Speed = Quantity<1, 0, -1, 0>;
using Energy = Quantity<2, 1, -2, 0>;
using Power = Quantity<2, 1, -3, 0>;
using Action = Quantity<2, 1, -1, 0>;
using Dipole = Quantity<1, 0, 0, 1>;
using ElectricField = Quantity<1, 1, -2, -1>;      // V/m = kg m s^-2 C^-1
using Intensity = Quantity<0, 1, -3, 0>;           // W/m^2
using Permittivity = Quantity<-3, -1, 2, 2>;       // C^2 s^2 kg^-1 m^-3
using Wavenumber = Quantity<-1, 0, 0, 0>;

/// Square root, defined for even exponents only.
template <int L, int M, int T, int Q>
  requires(L % 2 == 0 && M % 2 == 0 && T % 2 == 0 && Q % 2 == 0)
Quantity<L / 2, M / 2, T / 2, Q / 2> sqrt(Quantity<L, M, T, Q> a) {
  return Quantity<L / 2, M / 2, T / 2, Q / 2>(std::sqrt(a.value));
}

namespace constants {
inline constexpr Action hbar{1.054571817e-34};
inline constexpr Speed c{2.99792458e8};
inline constexpr Permittivity epsilon0{8.8541878128e-12};
inline constexpr double planck_h = 6.62607015e-34;
}  // namespace constants

// Conversions from the practical input units.
inline constexpr Length from_cm(double x) { return Length(x * 1e-2); }
inline constexpr Area from_cm2(double x) { return Area(x * 1e-4); }
inline constexpr Density from_per_cm3(double x) { return Density(x * 1e6); }
inline constexpr Dipole from_debye(double x) { return Dipole(x * 3.33564095e-30); }

}  // namespace heunpulse::units
