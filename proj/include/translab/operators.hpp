// operators.hpp
//
// Pointwise coefficients of the second-order operators attached to the
// graphical translator equation (V = e1):
//
//   Newton      a = DA(p), b = DB(p) for A(p) = p / W, B(p) = -p1 / W; the
//               linearised operator is phi -> div(a D phi) - b . D phi.
//   GradientL   the operator L = a_jk D_jk + b_j D_j satisfied by the first
//               derivatives of a solution.
//   Quasilinear the translator operator with frozen coefficients,
//               Q w = (1 + |p|^2)(Delta w + D1 w) - D^2 w(p, p).

#pragma once

#include "translab/grid.hpp"

namespace translab {

enum class CoefficientFlavor { Newton, GradientL, Quasilinear };

struct Coefficients {
  Sym2 a;
  Point2 b;
};

Coefficients newton_coefficients(Point2 p);
Coefficients gradient_l_coefficients(Point2 p, Sym2 hess);
Coefficients quasilinear_coefficients(Point2 p);

/// a_ij D_ij w + b_j D_j w.
inline double apply_nondivergence(const Coefficients& c, Point2 grad, Sym2 hess) {
  return c.a.xx * hess.xx + 2.0 * c.a.xy * hess.xy + c.a.yy * hess.yy +
         c.b.x1 * grad.x1 + c.b.x2 * grad.x2;
}

/// Eigenvalues of a symmetric 2x2 matrix, smaller first.
std::pair<double, double> eigenvalues(const Sym2& a);

/// (1 + |p|^2)^{3/2} <nu, DA(p) nu> for a unit vector nu.
double newton_ellipticity(Point2 p, Point2 nu);

}  // namespace translab
