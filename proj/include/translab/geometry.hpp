// geometry.hpp
//
// Extrinsic geometry of the graph x3 = u(x1, x2): area element, second
// fundamental form, curvatures, total curvature, area ratios, local energy
// and the pointwise decay probes.

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "translab/grid.hpp"

namespace translab {

/// Unit translation direction lying in the graph plane (third component 0).
class Direction {
 public:
  Direction() = default;  // e1
  Direction(double v1, double v2, double v3 = 0.0);

  [[nodiscard]] double v1() const { return v1_; }
  [[nodiscard]] double v2() const { return v2_; }

 private:
  double v1_ = 1.0;
  double v2_ = 0.0;
};

/// Value, gradient and Hessian of the height function at a point.
struct Jet {
  double value = 0.0;
  Point2 grad;
  Sym2 hess;
};

/// Pointwise access to a height function; nullopt outside its domain.
using HeightSampler = std::function<std::optional<Jet>(Point2)>;

/// Bilinear interpolation of u and of its finite-difference derivatives.
HeightSampler sampler_from(const ScalarField& u);

/// Principal curvature data at one point, built so that H^2 <= 2|A|^2 and
/// K <= |A|^2 / 2 hold in floating point, not just in exact arithmetic.
struct PointCurvature {
  double W = 1.0;
  double H = 0.0;       // trace of the shape operator, g^{ij} A_ij
  double K = 0.0;       // determinant of the shape operator
  double norm_a2 = 0.0; // |A|^2
};

PointCurvature curvature_at(Point2 grad, Sym2 hess);

struct GeometryReport {
  Direction V;
  ScalarField u;
  ScalarField du1, du2;
  ScalarField W;
  ScalarField A11, A12, A22;  // D_ij u / W
  ScalarField H;              // g^{ij} A_ij
  ScalarField H_div;          // div(Du / W), independent route
  ScalarField K;              // from the shape operator
  ScalarField K_graph;        // det D^2 u / W^4
  ScalarField norm_a2;
  ScalarField n1, n2, n3;     // (-Du, 1) / W
  ScalarField n_dot_v;
};

GeometryReport shape_report(const ScalarField& u, Direction V = {});

/// Integral of |A|^2 against the surface measure W dx.
Quadrature total_curvature(const GeometryReport& rep);

struct AreaRatio {
  double ratio = 0.0;
  bool empty = false;  // ball misses the sampled graph
};

/// H^2(graph within B_R(center)) / R^2, with nodes selected by their 3-D
/// position. Components are not separated.
AreaRatio area_ratio(const ScalarField& u, Point3 center, double R);

/// Integral of |A|^2 dH^2 over the part of the graph inside B_rho(center).
double local_energy(const GeometryReport& rep, Point3 center, double rho);

struct EckerAudit {
  double lhs = 0.0;         // sup over late times and B_{rho/2} of |A|^2
  double rhs = 0.0;         // rho^-4 times the space-time energy
  double fitted_c = kNaN;   // lhs / rhs; NaN when rhs == 0
  double sup_energy = 0.0;  // sup over times of local_energy
};

/// Mean-value audit over the translating family Sigma + tV, t in
/// [T - rho^2, T). Translating the surface by tV is the same as moving the
/// ball centre by -tV, which is how the family is realised.
EckerAudit ecker_audit(const GeometryReport& rep, Point3 center, double rho,
                       double T = 0.0, int n_times = 16);

struct DecayRow {
  double rho = 0.0;
  std::size_t nodes = 0;
  double sup_a = 0.0;              // sup |A|
  double sup_a_sqrt = 0.0;         // sup |A| rho^{1/2}
  double sup_a_linear_pos = 0.0;   // sup |A| rho over the shell with x.V > 0
  double sup_nv_sqrt = 0.0;        // sup |n.V| rho^{1/2}
  bool empty = false;
};

/// Shell sups over rho <= |x| < rho + shell_cells * h, with |x| the distance
/// of the surface point from the origin.
std::vector<DecayRow> decay_probe(const GeometryReport& rep,
                                  const std::vector<double>& radii,
                                  int shell_cells = 2);

/// Multi-column CSV keyed by node coordinates (inside nodes only).
void write_report_csv(std::ostream& os, const GeometryReport& rep);

}  // namespace translab
