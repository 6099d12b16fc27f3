#include "translab/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <deque>

namespace translab {

LinearizedCoefficients linearize(const ScalarField& u, CoefficientFlavor flavor) {
  const auto g = gradient(u);
  const auto D = hessian(u);
  LinearizedCoefficients c;
  c.flavor = flavor;
  const ScalarField blank(u.grid, u.mask);
  c.a11 = c.a12 = c.a22 = c.b1 = c.b2 = blank;
  c.min_ellipticity = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (u.mask.kind(k) == NodeKind::Outside) continue;
    const Point2 p{g.d1.values[k], g.d2.values[k]};
    const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
    Coefficients cf;
    switch (flavor) {
      case CoefficientFlavor::Newton:
        cf = newton_coefficients(p);
        break;
      case CoefficientFlavor::GradientL:
        cf = gradient_l_coefficients(p, {D.d11.values[k], D.d12.values[k], D.d22.values[k]});
        break;
      case CoefficientFlavor::Quasilinear:
        cf = quasilinear_coefficients(p);
        break;
    }
    c.a11.values[k] = cf.a.xx;
    c.a12.values[k] = cf.a.xy;
    c.a22.values[k] = cf.a.yy;
    c.b1.values[k] = cf.b.x1;
    c.b2.values[k] = cf.b.x2;
    const auto [lo, hi] = eigenvalues(cf.a);
    if (flavor == CoefficientFlavor::Newton) {
      c.min_ellipticity = std::min(c.min_ellipticity, std::pow(1.0 + s2, 1.5) * lo);
    } else {
      c.min_ellipticity = std::min(c.min_ellipticity, lo);
      c.max_upper_ratio = std::max(c.max_upper_ratio, hi / (1.0 + 2.0 * s2));
    }
  }
  c.elliptic = c.min_ellipticity >= 1.0 - 1e-12 && c.max_upper_ratio <= 1.0 + 1e-12;
  return c;
}

ScalarField apply_operator(const LinearizedCoefficients& c, const ScalarField& w) {
  if (c.flavor == CoefficientFlavor::Newton)
    throw std::invalid_argument("apply_operator: NEWTON coefficients are in divergence form");
  const GridSpec& g = w.grid;
  ScalarField out(g, w.mask);
  const double h = g.h;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!w.mask.inside(i, j)) continue;
      if (!w.mask.interior(i, j)) {
        out.at(i, j) = kNaN;
        continue;
      }
      const Point2 d{(w.at(i + 1, j) - w.at(i - 1, j)) / (2 * h),
                     (w.at(i, j + 1) - w.at(i, j - 1)) / (2 * h)};
      const Sym2 D{(w.at(i + 1, j) - 2 * w.at(i, j) + w.at(i - 1, j)) / (h * h),
                   (w.at(i + 1, j + 1) - w.at(i + 1, j - 1) - w.at(i - 1, j + 1) +
                    w.at(i - 1, j - 1)) / (4 * h * h),
                   (w.at(i, j + 1) - 2 * w.at(i, j) + w.at(i, j - 1)) / (h * h)};
      const Coefficients cf{{c.a11.at(i, j), c.a12.at(i, j), c.a22.at(i, j)},
                            {c.b1.at(i, j), c.b2.at(i, j)}};
      out.at(i, j) = apply_nondivergence(cf, d, D);
    }
  return out;
}

namespace {

struct LocalStencil {
  Point2 p;
  Sym2 D;
};

LocalStencil local(const ScalarField& u, int i, int j) {
  const double h = u.grid.h;
  return {{(u.at(i + 1, j) - u.at(i - 1, j)) / (2 * h),
           (u.at(i, j + 1) - u.at(i, j - 1)) / (2 * h)},
          {(u.at(i + 1, j) - 2 * u.at(i, j) + u.at(i - 1, j)) / (h * h),
           (u.at(i + 1, j + 1) - u.at(i + 1, j - 1) - u.at(i - 1, j + 1) +
            u.at(i - 1, j - 1)) / (4 * h * h),
           (u.at(i, j + 1) - 2 * u.at(i, j) + u.at(i, j - 1)) / (h * h)}};
}

double residual_at(const LocalStencil& s) {
  const auto& [p, D] = s;
  const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
  const double W2 = 1.0 + s2;
  const double N = W2 * (D.xx + D.yy + p.x1) -
                   (D.xx * p.x1 * p.x1 + 2 * D.xy * p.x1 * p.x2 + D.yy * p.x2 * p.x2);
  return N / (W2 * std::sqrt(W2));
}

double sup_interior(const ScalarField& r) {
  double m = 0.0;
  for (std::size_t k = 0; k < r.values.size(); ++k)
    if (r.mask.kind(k) == NodeKind::Interior) m = std::max(m, std::abs(r.values[k]));
  return m;
}

struct Unknowns {
  std::vector<int> id;  // per node, -1 when not an unknown
  std::vector<std::pair<int, int>> nodes;
};

Unknowns number_interior(const ScalarField& u) {
  Unknowns un;
  un.id.assign(u.values.size(), -1);
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i)
      if (u.mask.interior(i, j)) {
        un.id[u.grid.index(i, j)] = static_cast<int>(un.nodes.size());
        un.nodes.emplace_back(i, j);
      }
  return un;
}

}  // namespace

ScalarField residual(const ScalarField& u) {
  ScalarField r(u.grid, u.mask);
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i)
      if (u.mask.interior(i, j)) r.at(i, j) = residual_at(local(u, i, j));
  return r;
}

void validate(const TranslatorProblem& problem) {
  const ScalarField& b = problem.boundary;
  const GridSpec& g = b.grid;
  std::size_t inside = 0, start = 0;
  for (std::size_t k = 0; k < b.values.size(); ++k) {
    const NodeKind kind = b.mask.kind(k);
    if (kind == NodeKind::Outside) continue;
    if (inside++ == 0) start = k;
    if (kind == NodeKind::Boundary && !std::isfinite(b.values[k]))
      throw std::invalid_argument("TranslatorProblem: non-finite boundary data");
  }
  if (b.mask.count(NodeKind::Interior) == 0)
    throw std::invalid_argument("TranslatorProblem: no interior nodes");
  std::vector<char> seen(b.values.size(), 0);
  std::deque<std::size_t> queue{start};
  seen[start] = 1;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    ++reached;
    const int i = static_cast<int>(k % g.nx), j = static_cast<int>(k / g.nx);
    const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : nb) {
      const int a = i + d[0], c = j + d[1];
      if (!b.mask.inside(a, c)) continue;
      const std::size_t m = g.index(a, c);
      if (!seen[m]) {
        seen[m] = 1;
        queue.push_back(m);
      }
    }
  }
  if (reached != inside)
    throw std::invalid_argument("TranslatorProblem: domain is not connected");
}

ScalarField harmonic_extension(const TranslatorProblem& problem) {
  validate(problem);
  const ScalarField& b = problem.boundary;
  ScalarField u = b;
  const Unknowns un = number_interior(u);
  const int n = static_cast<int>(un.nodes.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * static_cast<std::size_t>(n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r) {
    const auto [i, j] = un.nodes[r];
    trips.emplace_back(r, r, 4.0);
    const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : nb) {
      const std::size_t m = u.grid.index(i + d[0], j + d[1]);
      if (un.id[m] >= 0)
        trips.emplace_back(r, un.id[m], -1.0);
      else
        rhs[r] += b.values[m];
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("harmonic_extension: factorization failed");
  const Eigen::VectorXd x = ldlt.solve(rhs);
  for (int r = 0; r < n; ++r) u.at(un.nodes[r].first, un.nodes[r].second) = x[r];
  return u;
}

SolveReport newton_solve(const TranslatorProblem& problem, const SolverSettings& st,
                         const ScalarField* initial) {
  validate(problem);
  if (st.max_iter < 1 || !(st.tol > 0) || st.max_halvings < 0)
    throw std::invalid_argument("newton_solve: invalid settings");
  SolveReport rep;
  ScalarField u = initial ? *initial : harmonic_extension(problem);
  if (!(u.grid == problem.boundary.grid))
    throw std::invalid_argument("newton_solve: initial iterate on a different grid");
  for (std::size_t k = 0; k < u.values.size(); ++k)
    if (u.mask.kind(k) == NodeKind::Boundary) u.values[k] = problem.boundary.values[k];

  const Unknowns un = number_interior(u);
  const int n = static_cast<int>(un.nodes.size());
  const double h = u.grid.h;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analysed = false;

  ScalarField r = residual(u);
  double res = sup_interior(r);
  rep.residual_history.push_back(res);
  while (res > st.tol) {
    if (rep.iterations >= st.max_iter) {
      rep.message = "maximum iterations reached";
      break;
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * static_cast<std::size_t>(n));
    Eigen::VectorXd F(n);
    for (int row = 0; row < n; ++row) {
      const auto [i, j] = un.nodes[row];
      const LocalStencil s = local(u, i, j);
      const auto& [p, D] = s;
      const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
      const double W2 = 1.0 + s2;
      const double W3 = W2 * std::sqrt(W2);
      const double lap1 = D.xx + D.yy + p.x1;
      const double N = W2 * lap1 -
                       (D.xx * p.x1 * p.x1 + 2 * D.xy * p.x1 * p.x2 + D.yy * p.x2 * p.x2);
      F[row] = N / W3;
      const double r11 = (1.0 + p.x2 * p.x2) / W3;
      const double r22 = (1.0 + p.x1 * p.x1) / W3;
      const double r12 = -2.0 * p.x1 * p.x2 / W3;
      const double n1 = 2 * p.x1 * lap1 + W2 - 2 * (p.x1 * D.xx + p.x2 * D.xy);
      const double n2 = 2 * p.x2 * lap1 - 2 * (p.x1 * D.xy + p.x2 * D.yy);
      const double rp1 = n1 / W3 - 3 * N * p.x1 / (W3 * W2);
      const double rp2 = n2 / W3 - 3 * N * p.x2 / (W3 * W2);
      const double ih2 = 1.0 / (h * h), i2h = 1.0 / (2 * h), i4h2 = 1.0 / (4 * h * h);
      auto put = [&](int a, int b, double v) {
        const int col = un.id[u.grid.index(i + a, j + b)];
        if (col >= 0 && v != 0.0) trips.emplace_back(row, col, v);
      };
      put(0, 0, -2 * ih2 * (r11 + r22));
      put(1, 0, r11 * ih2 + rp1 * i2h);
      put(-1, 0, r11 * ih2 - rp1 * i2h);
      put(0, 1, r22 * ih2 + rp2 * i2h);
      put(0, -1, r22 * ih2 - rp2 * i2h);
      put(1, 1, r12 * i4h2);
      put(-1, -1, r12 * i4h2);
      put(1, -1, -r12 * i4h2);
      put(-1, 1, -r12 * i4h2);
    }
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trips.begin(), trips.end());
    J.makeCompressed();
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("newton_solve: singular Jacobian");
    const Eigen::VectorXd delta = lu.solve(-F);
    const double fn = F.norm();
    rep.linear_residuals.push_back(fn > 0 ? (J * delta + F).norm() / fn : 0.0);
    if (!(rep.linear_residuals.back() <= st.linear_tol))
      throw std::runtime_error("newton_solve: linear solve missed its tolerance");

    double lambda = 1.0;
    bool accepted = false;
    ScalarField trial = u;
    for (int halving = 0; halving <= st.max_halvings; ++halving) {
      for (int row = 0; row < n; ++row) {
        const auto [i, j] = un.nodes[row];
        trial.at(i, j) = u.at(i, j) + lambda * delta[row];
      }
      ScalarField tr = residual(trial);
      const double tres = sup_interior(tr);
      if (std::isfinite(tres) && tres < res) {
        u = trial;
        res = tres;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      rep.message = "step rejected at the damping floor";
      break;
    }
    ++rep.iterations;
    rep.step_lengths.push_back(lambda);
    rep.residual_history.push_back(res);
  }
  rep.converged = res <= st.tol;
  if (rep.converged) rep.message = "converged";
  rep.solution = std::move(u);
  return rep;
}

}  // namespace translab
