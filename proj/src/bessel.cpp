#include "translab/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "translab/grid.hpp"

namespace translab {

namespace {

constexpr double kEuler = 0.57721566490153286061;

void check_domain(double x) {
  if (!(x > 0.0)) throw DomainError("K0: argument must be positive");
}

// K0 and K1 from the ascending series.
std::pair<double, double> series(double x) {
  const double t = 0.25 * x * x;
  const double lg = std::log(0.5 * x);
  double i0 = 0, i1s = 0, k0s = 0, k1s = 0;
  double term0 = 1.0;  // t^k / (k!)^2
  double term1 = 1.0;  // t^k / (k! (k+1)!)
  double harm = 0.0;   // H_k
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term0 *= t / (double(k) * k);
      term1 *= t / (double(k) * (k + 1));
      harm += 1.0 / k;
    }
    i0 += term0;
    i1s += term1;
    k0s += term0 * harm;
    // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
    k1s += term1 * (2 * harm + 1.0 / (k + 1) - 2 * kEuler);
    if (term0 < 1e-18 * i0 && k > 2) break;
  }
  const double K0 = -(lg + kEuler) * i0 + k0s;
  const double I1 = 0.5 * x * i1s;
  const double K1 = 1.0 / x + lg * I1 - 0.25 * x * k1s;
  return {K0, K1};
}

// Steed's method (continued fraction CF2 with Temme's normalisation) for
// nu = 0; returns e^x K0(x), e^x K1(x). Valid for x >= 2.
std::pair<double, double> continued_fraction_scaled(double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h = a1 * h;
  const double k0e = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  const double k1e = k0e * (x + 0.5 - h) / x;
  return {k0e, k1e};
}

// Hankel asymptotic expansion, truncated at the smallest term.
std::pair<double, double> asymptotic_scaled(double x) {
  const double pre = std::sqrt(std::numbers::pi / (2.0 * x));
  double s0 = 1.0, s1 = 1.0;
  double t0 = 1.0, t1 = 1.0;
  const double z = 8.0 * x;
  for (int k = 1; k < 200; ++k) {
    const double m = 2.0 * k - 1.0;
    const double n0 = -(m * m);          // (0 - m^2)
    const double n1 = 4.0 - m * m;       // (4 - m^2)
    const double next0 = t0 * n0 / (k * z);
    const double next1 = t1 * n1 / (k * z);
    if (std::abs(next0) > std::abs(t0)) break;
    t0 = next0;
    t1 = next1;
    s0 += t0;
    s1 += t1;
    if (std::abs(t0) < 1e-18 * std::abs(s0) && std::abs(t1) < 1e-18 * std::abs(s1))
      break;
  }
  // Term k carries the factor (mu - (2k-1)^2) / (8 k x), mu = 4 nu^2.
  return {pre * s0, pre * s1};
}

std::pair<double, double> scaled_pair(double x) {
  check_domain(x);
  if (x <= kBesselSeriesMax) {
    auto [a, b] = series(x);
    const double e = std::exp(x);
    return {a * e, b * e};
  }
  if (x < kBesselAsymptoticMin) return continued_fraction_scaled(x);
  return asymptotic_scaled(x);
}

}  // namespace

double k0_scaled(double x) { return scaled_pair(x).first; }
double k1_scaled(double x) { return scaled_pair(x).second; }

BesselValue k0_checked(double x) {
  check_domain(x);
  if (x <= kBesselSeriesMax) return {series(x).first, false};
  const double v = scaled_pair(x).first * std::exp(-x);
  return {v, v == 0.0 || v < std::numeric_limits<double>::min()};
}

double k0(double x) { return k0_checked(x).value; }

double k0_prime(double x) {
  check_domain(x);
  if (x <= kBesselSeriesMax) return -series(x).second;
  return -scaled_pair(x).second * std::exp(-x);
}

double k0_second(double x) { return k0(x) - k0_prime(x) / x; }

}  // namespace translab
