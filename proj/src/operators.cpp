#include "translab/operators.hpp"

#include <cmath>
#include <utility>

namespace translab {

Coefficients newton_coefficients(Point2 p) {
  const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
  const double W = std::sqrt(1.0 + s2);
  const double W3 = W * W * W;
  Coefficients c;
  c.a = {(1.0 + s2 - p.x1 * p.x1) / W3, -p.x1 * p.x2 / W3,
         (1.0 + s2 - p.x2 * p.x2) / W3};
  // B(p) = -p1 / W  =>  DB = -e1 / W + p1 p / W^3
  c.b = {-1.0 / W + p.x1 * p.x1 / W3, p.x1 * p.x2 / W3};
  return c;
}

Coefficients gradient_l_coefficients(Point2 p, Sym2 D) {
  const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
  Coefficients c;
  c.a = {1.0 + s2 - p.x1 * p.x1, -p.x1 * p.x2, 1.0 + s2 - p.x2 * p.x2};
  const double lap = D.xx + D.yy;
  const double Dpp = D.xx * p.x1 * p.x1 + 2 * D.xy * p.x1 * p.x2 + D.yy * p.x2 * p.x2;
  const double mult = p.x1 + lap - 3.0 * Dpp / (1.0 + s2);
  // b_j = (1+|p|^2) delta_1j - 2 p_k D_jk u - mult * p_j
  c.b = {(1.0 + s2) - 2.0 * (p.x1 * D.xx + p.x2 * D.xy) - mult * p.x1,
         -2.0 * (p.x1 * D.xy + p.x2 * D.yy) - mult * p.x2};
  return c;
}

Coefficients quasilinear_coefficients(Point2 p) {
  const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
  Coefficients c;
  c.a = {1.0 + s2 - p.x1 * p.x1, -p.x1 * p.x2, 1.0 + s2 - p.x2 * p.x2};
  c.b = {1.0 + s2, 0.0};
  return c;
}

std::pair<double, double> eigenvalues(const Sym2& a) {
  const double m = 0.5 * (a.xx + a.yy);
  const double d = 0.5 * (a.xx - a.yy);
  const double r = std::hypot(d, a.xy);
  return {m - r, m + r};
}

double newton_ellipticity(Point2 p, Point2 nu) {
  const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
  const Coefficients c = newton_coefficients(p);
  const double q = c.a.xx * nu.x1 * nu.x1 + 2 * c.a.xy * nu.x1 * nu.x2 +
                   c.a.yy * nu.x2 * nu.x2;
  return std::pow(1.0 + s2, 1.5) * q;
}

}  // namespace translab
