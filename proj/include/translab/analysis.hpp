// analysis.hpp
//
// Measurements on graphs: curves over circles and their geodesic curvature,
// coarea slicing, Gauss-Bonnet, blow-down sequences, decay fits and the
// maximum-principle audits.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "translab/geometry.hpp"

namespace translab {

/// Graph of u over the circle |x - center| = rho, sampled at n uniform angles
/// starting from theta = 0, counter-clockwise.
struct GraphCircle {
  Curve curve;
  std::vector<Jet> jets;
  std::vector<double> theta;
};

/// DomainError when the sampler is undefined somewhere on the circle.
GraphCircle graph_circle(const HeightSampler& u, Point2 center, double rho, int n);

// ---------------------------------------------------------------- slicing

struct SliceResult {
  double rho = 0.0;
  Curve curve;
  double line_energy = 0.0;  // int_Gamma |A|^2 dH^1 at the chosen radius
  double budget = 0.0;       // window average of the line energy
  std::vector<std::pair<double, double>> candidates;  // (rho, line energy)
};

/// Chooses the candidate radius in [r1, r2] with least line energy (ties go
/// to the smaller radius). Candidates whose circle leaves the domain are
/// skipped; DomainError if none remain.
SliceResult coarea_slice(const HeightSampler& u, double r1, double r2,
                         int n_candidates = 16, Point2 center = {},
                         int n_samples = 256);

// ---------------------------------------------------------------- Gauss-Bonnet

struct GeodesicCurvature {
  std::vector<double> kappa_g;
  double integral = 0.0;
  Curve curve;
};

/// Geodesic curvature of the graph circle, signed so that the traversal keeps
/// the enclosed disk on the left; `reverse` flips the traversal (and sign).
/// ResolutionError below 64 samples.
GeodesicCurvature geodesic_curvature(const HeightSampler& u, Point2 center,
                                     double rho, int n_samples = 512,
                                     bool reverse = false);

struct Topology {
  int m1 = 1;  // components
  int genus = 0;
  int m0 = 1;  // boundary circles
};

struct GaussBonnetAudit {
  double interior = 0.0;  // int K dH^2
  double boundary = 0.0;  // sum of int kappa_g over the boundary circles
  double euler = 0.0;     // 2 pi (2 M1 - 2 g - M0)
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Region D_{r_out}(center) \ D_{r_in}(center); r_in = 0 is a disk. The
/// interior integral uses Gauss-Legendre in r and the periodic trapezoid in
/// theta. `h` sets the tolerance max(1e-3, 10 h).
GaussBonnetAudit gauss_bonnet_audit(const HeightSampler& u, Point2 center,
                                    double r_in, double r_out, Topology topo,
                                    double h, int n_samples = 512);

// ---------------------------------------------------------------- blow-down

struct BlowdownSequence {
  std::vector<double> scales;
  std::vector<double> sup_u;   // sup |lambda u(x / lambda)|
  std::vector<double> sup_du;  // sup |Du(x / lambda)|
  std::vector<std::size_t> undefined;  // annulus samples off the data's domain
  double m = 4.0;
  bool truncated = false;  // some scale reaches outside the data
  [[nodiscard]] bool monotone() const;
};

/// Samples the annulus 1/m <= |x| <= m on an n_r x n_theta polar lattice.
BlowdownSequence blowdown(const HeightSampler& u, const std::vector<double>& scales,
                          double m = 4.0, int n_r = 64, int n_theta = 256);

// ---------------------------------------------------------------- decay fits

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;          // root-mean-square residual in log space
  double slope_width = 0.0;  // two standard errors
  std::size_t samples = 0;
};

/// Least squares y = intercept + slope * x; throws with fewer than 2 points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct DecayFit {
  std::string mode;  // "ray" or "radial"
  std::size_t samples = 0;
  // ray: |u| ~ A e^{-mu s}
  double mu = kNaN;
  double amplitude = kNaN;
  double rms = kNaN;
  double width = kNaN;
  // radial: |u| ~ A r^{-beta} and |u| ~ A r^q e^{-x1/4} sqrt(K0(r/2))
  double beta = kNaN;
  double power_rms = kNaN;
  double q = kNaN;
  double bessel_rms = kNaN;
  std::string better;
  double envelope = kNaN;         // C with |u| <= C P on the inner samples
  double envelope_excess = kNaN;  // max |u| / (C P) over all samples
  bool compliant = false;         // envelope_excess <= 1.05
};

/// Fit of |u(s)| ~ A e^{-mu s} to raw samples (s, value). Values with
/// |value| <= 1e-14 are dropped; fewer than 20 left is an error.
DecayFit decay_fit_ray_samples(const std::vector<double>& s,
                               const std::vector<double>& values);

/// Samples u along offset + s * direction, s in [s0, s1].
DecayFit decay_fit_ray(const HeightSampler& u, Point2 direction, Point2 offset,
                       double s0, double s1, int n = 64);

/// Radial fit over r in [r0, r1] with the 30 degree sector about -e1 removed;
/// the envelope constant is calibrated on r < r0 + (r1 - r0) / 4.
DecayFit decay_fit_radial(const HeightSampler& u, double r0, double r1,
                          double alpha = 8.0, int n_r = 48, int n_theta = 72);

// ---------------------------------------------------------------- max principle

struct GradientAudit {
  double interior_max[2] = {0, 0}, interior_min[2] = {0, 0};
  double boundary_max[2] = {0, 0}, boundary_min[2] = {0, 0};
  double tolerance = 0.0;  // 10 h^2
  double excess = 0.0;     // largest amount an interior extreme overshoots
  bool pass = false;
};

/// Interior extremes of D1 u, D2 u against their BOUNDARY extremes. Rejects
/// fields whose translator residual exceeds `residual_cap`.
GradientAudit weak_gradient_audit(const ScalarField& u, double residual_cap = 1e-8);

struct ComparisonAudit {
  double min_gap = 0.0;          // min of u2 - u1 over inside nodes
  Point2 min_location;
  bool min_on_boundary = false;
  double boundary_min_gap = 0.0;
  double tolerance = 0.0;        // 10 h^2
  std::vector<Point2> touching;  // interior nodes with gap below tolerance
  bool pass = false;
};

/// Requires u1 <= u2 on the BOUNDARY nodes (std::invalid_argument otherwise)
/// and converged inputs.
ComparisonAudit comparison_audit(const ScalarField& u1, const ScalarField& u2,
                                 double residual_cap = 1e-8);

// For a solution u: L(v^2) with v = D_k u and L frozen at u, and Q(u^2) with
// the quasilinear coefficients at u, whose exact value is
// 2(1+|Du|^2)|Du|^2 - 2|Du|^4 = 2|Du|^2. Quantities that difference the
// discrete gradient are read on the second interior layer (all eight
// neighbours interior), where every v in the stencil is a centred difference.
struct SubsolutionAudit {
  double min_l_v2[2] = {0, 0};  // k = 1, 2; second layer
  double min_q_u2 = 0.0;        // all interior nodes
  double closed_form_gap = 0.0; // max |Q(u^2) - 2|Du|^2|, second layer
  double printed_gap = 0.0;     // same against 2(1+|Du|^2)|Du|^2 + 2|Du|^4
  std::size_t nodes = 0;        // second-layer nodes
  double tolerance = 0.0;       // 10 h^2
  bool pass = false;
};

SubsolutionAudit subsolution_audit(const ScalarField& u, double residual_cap = 1e-8);

}  // namespace translab
