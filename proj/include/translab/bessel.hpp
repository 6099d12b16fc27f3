// bessel.hpp
//
// Modified Bessel function of the second kind, order zero, and its
// derivatives. Three regimes:
//   x <= 2        power series built on I0 / I1,
//   2 < x < 20    Steed / Temme continued fraction,
//   x >= 20       asymptotic expansion, summed to its smallest term.
// Relative accuracy is a few ulp on [1e-3, 700]. Beyond ~745 the result
// underflows; k0_checked reports that instead of silently returning zero.

#pragma once

namespace translab {

struct BesselValue {
  double value = 0.0;
  bool underflow = false;
};

/// Series/asymptotic crossover points (exposed for the seam tests).
inline constexpr double kBesselSeriesMax = 2.0;
inline constexpr double kBesselAsymptoticMin = 20.0;

/// K0(x); throws DomainError for x <= 0 or NaN.
double k0(double x);
/// K0'(x) = -K1(x).
double k0_prime(double x);
/// K0''(x) from the Bessel equation: K0 - K0'/x.
double k0_second(double x);
/// e^x K0(x) and e^x K1(x), finite for all x > 0.
double k0_scaled(double x);
double k1_scaled(double x);

BesselValue k0_checked(double x);

}  // namespace translab
