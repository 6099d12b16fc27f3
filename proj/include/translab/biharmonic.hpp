// biharmonic.hpp
//
// Clamped-plate replacement on a disk: Delta^2 w = 0 in D_rho(center) with
// w = u and Dw = Du on the circle. The 13-point stencil is applied at grid
// nodes inside the disk; the two node layers outside it are filled from the
// source height function, which fixes both the trace and the normal
// derivative to second order.

#pragma once

#include "translab/geometry.hpp"

namespace translab {

struct BiharmonicResult {
  ScalarField w;          // disk nodes plus the two-layer collar
  ScalarField in_disk;    // 1 on disk nodes, 0 on the collar
  Point2 center;
  double rho = 0.0;
  std::size_t unknowns = 0;
  double linear_residual = 0.0;  // relative, of the 13-point system
};

/// Throws DomainError when the source is undefined on the collar and
/// ResolutionError when rho < 4h.
BiharmonicResult biharmonic_solve(const HeightSampler& source, Point2 center,
                                  double rho, double h);

/// Integral over the disk of |D^2 w|^2 = w11^2 + 2 w12^2 + w22^2.
double hessian_energy(const BiharmonicResult& b);

struct EnergyCheck {
  double lhs = 0.0;        // int |D^2 w|^2
  double rhs = 0.0;        // rho * int_Gamma |A|^2 dH^1
  double fitted_c = kNaN;  // lhs / rhs
  bool undefined = false;  // rhs == 0
  bool flagged = false;    // rhs == 0 while lhs is not
};

/// Gamma is the graph of the source over the boundary circle.
EnergyCheck biharmonic_energy_check(const BiharmonicResult& b,
                                    const HeightSampler& source,
                                    int n_samples = 512);

}  // namespace translab
