#include "translab/biharmonic.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "translab/analysis.hpp"

namespace translab {

BiharmonicResult biharmonic_solve(const HeightSampler& source, Point2 center,
                                  double rho, double h) {
  if (!(h > 0) || !(rho >= 4 * h))
    throw ResolutionError("biharmonic_solve: need rho >= 4h");
  const int m = static_cast<int>(std::ceil(rho / h)) + 4;
  const GridSpec grid({center.x1 - m * h, center.x2 - m * h}, h, 2 * m + 1, 2 * m + 1);
  const DomainMask mask(grid, shape::Disk{rho + 2.5 * h, center});

  // The stencil annihilates affine functions, so the solve runs on the
  // remainder after the tangent plane at the centre is removed.
  Jet tangent;
  if (const auto j0 = source(center)) tangent = *j0;
  const auto affine = [&](Point2 x) {
    return tangent.value + tangent.grad.x1 * (x.x1 - center.x1) +
           tangent.grad.x2 * (x.x2 - center.x2);
  };

  BiharmonicResult res;
  res.center = center;
  res.rho = rho;
  res.w = ScalarField(grid, mask);
  res.in_disk = ScalarField(grid, mask);
  std::vector<int> id(grid.size(), -1);
  std::vector<std::pair<int, int>> nodes;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      if (!mask.inside(i, j)) continue;
      const Point2 x = grid.node(i, j);
      if (norm({x.x1 - center.x1, x.x2 - center.x2}) < rho) {
        id[grid.index(i, j)] = static_cast<int>(nodes.size());
        nodes.emplace_back(i, j);
        res.in_disk.at(i, j) = 1.0;
      } else {
        const auto jet = source(x);
        if (!jet) throw DomainError("biharmonic_solve: source undefined on the collar");
        res.w.at(i, j) = jet->value;
      }
    }
  const int n = static_cast<int>(nodes.size());
  res.unknowns = nodes.size();
  struct Tap {
    int di, dj;
    double c;
  };
  static constexpr Tap taps[] = {{0, 0, 20},  {1, 0, -8},  {-1, 0, -8}, {0, 1, -8},
                                 {0, -1, -8}, {1, 1, 2},   {1, -1, 2},  {-1, 1, 2},
                                 {-1, -1, 2}, {2, 0, 1},   {-2, 0, 1},  {0, 2, 1},
                                 {0, -2, 1}};
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(13 * static_cast<std::size_t>(n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r) {
    const auto [i, j] = nodes[r];
    for (const Tap& t : taps) {
      const int a = i + t.di, b = j + t.dj;
      const std::size_t k = grid.index(a, b);
      if (id[k] >= 0)
        trips.emplace_back(r, id[k], t.c);
      else
        rhs[r] -= t.c * (res.w.values[k] - affine(grid.node(a, b)));
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("biharmonic_solve: factorization failed (" +
                             std::to_string(n) + " unknowns)");
  const Eigen::VectorXd x = lu.solve(rhs);
  const double bn = rhs.norm();
  res.linear_residual = bn > 0 ? (A * x - rhs).norm() / bn : 0.0;
  if (!(res.linear_residual < 1e-8))
    throw std::runtime_error("biharmonic_solve: ill-conditioned system, relative residual " +
                             std::to_string(res.linear_residual));
  for (int r = 0; r < n; ++r) {
    const auto [i, j] = nodes[r];
    res.w.at(i, j) = affine(grid.node(i, j)) + x[r];
  }
  return res;
}

double hessian_energy(const BiharmonicResult& b) {
  const auto D = hessian(b.w);
  ScalarField f(b.w.grid, b.w.mask);
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (f.mask.kind(k) == NodeKind::Outside) continue;
    const double a = D.d11.values[k], c = D.d12.values[k], d = D.d22.values[k];
    f.values[k] = b.in_disk.values[k] * (a * a + 2 * c * c + d * d);
  }
  return integrate(f).value;
}

EnergyCheck biharmonic_energy_check(const BiharmonicResult& b, const HeightSampler& source,
                                    int n_samples) {
  const GraphCircle gc = graph_circle(source, b.center, b.rho, n_samples);
  std::vector<double> a2(gc.jets.size());
  for (std::size_t k = 0; k < a2.size(); ++k)
    a2[k] = curvature_at(gc.jets[k].grad, gc.jets[k].hess).norm_a2;
  EnergyCheck e;
  e.lhs = hessian_energy(b);
  e.rhs = b.rho * line_integral(a2, gc.curve);
  e.undefined = !(e.rhs > 0);
  e.flagged = e.undefined && e.lhs > 1e-12;
  if (!e.undefined) e.fitted_c = e.lhs / e.rhs;
  return e;
}

}  // namespace translab
