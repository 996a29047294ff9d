#pragma once

namespace hiermod {

/// First positive zero of J1.
inline constexpr double kBesselJ1FirstZero = 3.8317059702075123;

/// Bessel function of the first kind, order 1. Power series for |x| <= 12,
/// Hankel asymptotic expansion beyond; absolute error below 1e-10.
double bessel_j1(double x);

/// 2 J1(u) / u, continuous at u = 0 where it equals 1.
double airy_amplitude(double u);

} // namespace hiermod
