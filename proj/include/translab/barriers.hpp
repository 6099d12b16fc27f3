// barriers.hpp
//
// Exact translators, barrier functions with closed-form jets, and the sign
// and comparison checks run on them.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "translab/geometry.hpp"
#include "translab/operators.hpp"

namespace translab {

namespace exact {
struct Plane {
  double c = 0.0;
};
/// u = a x2 + b.
struct TiltedPlane {
  double a = 0.0;
  double b = 0.0;
};
/// u = D - arcsin(C e^{-x1}) on {x1 > ln C}; u'/W = C e^{-x1}.
struct ExpEnd {
  double C = 0.5;
  double D = 0.0;
};
}  // namespace exact

class ExactSolution {
 public:
  using Kind = std::variant<exact::Plane, exact::TiltedPlane, exact::ExpEnd>;

  ExactSolution() = default;
  explicit ExactSolution(Kind kind);  // validates C > 0 for ExpEnd

  [[nodiscard]] const Kind& kind() const { return kind_; }
  [[nodiscard]] bool defined_at(Point2 x) const;
  /// Closed-form value, gradient and Hessian; DomainError off the domain.
  [[nodiscard]] Jet jet(Point2 x) const;
  [[nodiscard]] double value(Point2 x) const { return jet(x).value; }
  /// Mean curvature H = n.V of the graph.
  [[nodiscard]] double mean_curvature(Point2 x) const;
  [[nodiscard]] std::string describe() const;

 private:
  Kind kind_ = exact::Plane{};
};

/// Samples u on the mask; DomainError if an inside node lies off the domain.
ScalarField eval_exact(const ExactSolution& sol, const GridSpec& grid,
                       const DomainMask& mask);
HeightSampler sampler_from(const ExactSolution& sol);

namespace barrier {
/// e^{-mu x1}.
struct Exp {
  double mu = 0.5;
};
/// phi_alpha = r^{2/alpha} e^{-x1/2} K0(r/2), alpha > 4.
struct Bessel {
  double alpha = 8.0;
};
/// c1 phi_alpha + c2 e^{-(x1+n)/2} + eps.
struct Composite {
  double c1 = 1.0;
  double c2 = 1.0;
  double eps = 1e-6;
  double n = 50.0;
  Bessel bessel;
};
}  // namespace barrier

using BarrierSpec = std::variant<barrier::Exp, barrier::Bessel, barrier::Composite>;

/// Throws std::invalid_argument on a non-positive constant or alpha <= 4.
void validate(const BarrierSpec& spec);
std::string describe(const BarrierSpec& spec);

/// Closed-form jet. Bessel kinds throw DomainError at r = 0.
Jet barrier_jet(const BarrierSpec& spec, Point2 x);
inline double barrier_value(const BarrierSpec& spec, Point2 x) {
  return barrier_jet(spec, x).value;
}

ScalarField eval_barrier(const BarrierSpec& spec, const GridSpec& grid,
                         const DomainMask& mask);

enum class SignFlavor {
  LinearL,       // L with coefficients from a background solution
  QuasilinearQ,  // Q with coefficients frozen at a background solution
  QuasilinearSelf  // Q evaluated on the barrier itself
};

struct SignViolation {
  Point2 x;
  double value = 0.0;
};

struct SignReport {
  double max_value = -std::numeric_limits<double>::infinity();
  double max_relative = -std::numeric_limits<double>::infinity();  // value / phi
  std::size_t nodes = 0;
  std::vector<SignViolation> violations;  // nodes with value >= 0
  bool pass = false;
};

/// Discrete operator applied to the sampled barrier at the INTERIOR nodes of
/// the background's mask, optionally restricted to r_min <= |x| <= r_max.
SignReport supersolution_check(const BarrierSpec& spec, SignFlavor flavor,
                               const ScalarField& background,
                               double r_min = 0.0,
                               double r_max = std::numeric_limits<double>::infinity());

struct ScanSettings {
  double r_min = 1.0;
  double r_max = 200.0;
  double dr = 1.0;
  int n_theta = 256;
  double h = 1e-2;        // stencil spacing for the discrete operator
  bool analytic = false;  // closed-form derivatives instead of the stencil
};

struct ScanRing {
  double r = 0.0;
  double max_value = 0.0;
  double max_relative = 0.0;
};

struct ScanResult {
  std::vector<ScanRing> rings;
  double r0 = kNaN;  // first ring from which every later ring is negative
  double max_relative_beyond = kNaN;
  bool found = false;
};

/// Ring-by-ring scan of the sign of the operator applied to the barrier.
/// The background (used by LinearL / QuasilinearQ) defaults to u = 0.
ScanResult barrier_scan(const BarrierSpec& spec, SignFlavor flavor,
                        const ScanSettings& settings,
                        const HeightSampler& background = {});

struct ComparisonReport {
  bool boundary_ok = false;
  bool interior_ok = false;
  double margin = kNaN;        // min over inside nodes of phi - u^2
  double limit_margin = kNaN;  // min of c1 phi + eps - u^2
  std::vector<Point2> offending;
};

ComparisonReport comparison_check(const ScalarField& u,
                                  const barrier::Composite& spec);

/// Constants with c1 phi >= ||u^2|| on the layer of inside nodes with
/// |x| < r0 + 2h, c2 > ||u^2||.
barrier::Composite composite_recipe(const ScalarField& u, double r0, double n,
                                    double eps, double alpha = 8.0);

}  // namespace translab
