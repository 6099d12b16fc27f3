// solver.hpp
//
// Damped Newton solver for the graphical translator equation
//
//   div(Du / W) + D1 u / W = 0,   W = (1 + |Du|^2)^{1/2},
//
// discretised in non-divergence form R(u) = N(u) / W^3 with
// N = (1 + |Du|^2)(Delta u + D1 u) - D^2 u(Du, Du), plus the coefficient
// fields of the linearised operators.

#pragma once

#include <vector>

#include "translab/grid.hpp"
#include "translab/operators.hpp"

namespace translab {

struct LinearizedCoefficients {
  CoefficientFlavor flavor = CoefficientFlavor::Newton;
  ScalarField a11, a12, a22, b1, b2;
  /// NEWTON: min over nodes and directions of (1+|p|^2)^{3/2} <nu, a nu>.
  /// GRADIENT_L / QUASILINEAR: min eigenvalue of a.
  double min_ellipticity = 0.0;
  /// GRADIENT_L: max over nodes of lambda_max(a) / (1 + 2|Du|^2).
  double max_upper_ratio = 0.0;
  bool elliptic = false;
};

LinearizedCoefficients linearize(const ScalarField& u, CoefficientFlavor flavor);

/// a : D^2 w + b . Dw at INTERIOR nodes (NaN elsewhere). Rejects NEWTON,
/// whose operator is in divergence form.
ScalarField apply_operator(const LinearizedCoefficients& c, const ScalarField& w);

/// Discrete translator residual at INTERIOR nodes; 0 on BOUNDARY, NaN outside.
ScalarField residual(const ScalarField& u);

struct TranslatorProblem {
  /// Mask and Dirichlet values; only BOUNDARY entries are read.
  ScalarField boundary;
};

struct SolverSettings {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 8;  // step floor 2^-8
  double linear_tol = 1e-10;
};

struct SolveReport {
  ScalarField solution;
  std::vector<double> residual_history;  // sup-norm, one entry per iterate
  std::vector<double> step_lengths;
  std::vector<double> linear_residuals;  // relative, per Newton step
  int iterations = 0;
  bool converged = false;
  std::string message;
};

/// Throws std::invalid_argument for non-finite boundary data or a
/// disconnected domain.
void validate(const TranslatorProblem& problem);

/// Five-point Laplace solve with the problem's Dirichlet data.
ScalarField harmonic_extension(const TranslatorProblem& problem);

/// Newton iteration from `initial` (harmonic extension when null). A singular
/// Jacobian throws std::runtime_error.
SolveReport newton_solve(const TranslatorProblem& problem,
                         const SolverSettings& settings = {},
                         const ScalarField* initial = nullptr);

}  // namespace translab
