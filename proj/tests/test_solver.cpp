#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "translab/barriers.hpp"
#include "translab/solver.hpp"

using namespace translab;

namespace {

double sup_interior(const ScalarField& f) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.mask.kind(k) == NodeKind::Interior) m = std::max(m, std::abs(f.values[k]));
  return m;
}

ScalarField rect(double h, auto f) {
  const GridSpec g = GridSpec::covering(1, 3, -1, 1, h);
  return ScalarField::sample(g, DomainMask(g, shape::Rectangle{}), f);
}

double at_node_coefficient(const ScalarField& f) {
  for (std::size_t k = 0; k < f.values.size(); ++k)
    if (f.mask.kind(k) == NodeKind::Interior) return f.values[k];
  return kNaN;
}

}  // namespace

TEST_CASE("residual vanishes on planes") {
  CHECK(sup_interior(residual(rect(0.1, [](Point2) { return 4.0; }))) == 0.0);
  CHECK(sup_interior(residual(rect(0.1, [](Point2 x) { return 0.7 * x.x2 - 2; }))) < 1e-13);
}

TEST_CASE("residual of the exact end is second order") {
  const ExactSolution end(exact::ExpEnd{0.5, 0});
  std::vector<double> r;
  for (double h : {0.1, 0.05, 0.025}) {
    const GridSpec g = GridSpec::covering(1, 3, -1, 1, h);
    r.push_back(sup_interior(residual(eval_exact(end, g, DomainMask(g, shape::Rectangle{})))));
  }
  CHECK(std::log2(r[0] / r[1]) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(r[1] / r[2]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("coefficients at a flat state") {
  const ScalarField zero = rect(0.1, [](Point2) { return 0.0; });
  const auto n = linearize(zero, CoefficientFlavor::Newton);
  CHECK(at_node_coefficient(n.a11) == 1.0);
  CHECK(at_node_coefficient(n.a12) == 0.0);
  CHECK(at_node_coefficient(n.a22) == 1.0);
  CHECK(at_node_coefficient(n.b1) == -1.0);
  CHECK(at_node_coefficient(n.b2) == 0.0);
  const auto l = linearize(zero, CoefficientFlavor::GradientL);
  CHECK(at_node_coefficient(l.a11) == 1.0);
  CHECK(at_node_coefficient(l.b1) == 1.0);
  CHECK(at_node_coefficient(l.b2) == 0.0);
  CHECK(l.elliptic);
  CHECK_THROWS(apply_operator(n, zero));
}

TEST_CASE("linear operator on known functions") {
  const ScalarField zero = rect(0.05, [](Point2) { return 0.0; });
  const auto l = linearize(zero, CoefficientFlavor::GradientL);
  // At Du = 0, L w = Laplacian w + D1 w.
  const ScalarField w = rect(0.05, [](Point2 x) { return x.x1 * x.x1 + 3 * x.x2; });
  const ScalarField lw = apply_operator(l, w);
  for (int j = 0; j < w.grid.ny; ++j)
    for (int i = 0; i < w.grid.nx; ++i)
      if (w.mask.interior(i, j)) CHECK(lw.at(i, j) == doctest::Approx(2 + 2 * w.grid.x1(i)));
}

TEST_CASE("flat data give the flat solution at once") {
  const SolveReport r = newton_solve({rect(0.1, [](Point2) { return 0.0; })});
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
  for (double v : r.solution.values) CHECK(v == 0.0);
}

TEST_CASE("exact family is recovered with quadratic convergence") {
  const ExactSolution end(exact::ExpEnd{0.5, 0});
  const GridSpec g = GridSpec::covering(1, 5, -2, 2, 0.05);
  const ScalarField b = eval_exact(end, g, DomainMask(g, shape::Rectangle{}));
  const SolveReport r = newton_solve({b});
  REQUIRE(r.converged);
  CHECK(r.iterations <= 10);
  double err = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) err = std::max(err, std::abs(r.solution.at(i, j) - end.value(g.node(i, j))));
  CHECK(err < 5e-4);
  const auto& h = r.residual_history;
  for (std::size_t k = 1; k < h.size(); ++k) CHECK(h[k] < h[k - 1]);
  for (std::size_t k = 1; k < h.size(); ++k)
    if (h[k - 1] < 1e-2) CHECK(h[k] <= 10 * h[k - 1] * h[k - 1] + 1e-13);
  for (double lr : r.linear_residuals) CHECK(lr <= 1e-10);
}

TEST_CASE("iteration cap reports failure") {
  const GridSpec g = GridSpec::covering(-2, 2, -2, 2, 0.05);
  const ScalarField b = ScalarField::sample(g, DomainMask(g, shape::Disk{2, {}}), [](Point2 x) {
    return 1.5 * std::sin(3 * x.x1) * std::cos(2 * x.x2);
  });
  SolverSettings st;
  st.max_iter = 1;
  const SolveReport r = newton_solve({b}, st);
  CHECK_FALSE(r.converged);
  CHECK(r.message == "maximum iterations reached");
  CHECK(r.residual_history.size() == 2);
}

TEST_CASE("problem validation") {
  const GridSpec g = GridSpec::covering(0, 2, 0, 1, 0.1);
  std::vector<bool> two(g.size(), false);
  for (int j = 2; j <= 8; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (i <= 6 || i >= 14) two[g.index(i, j)] = true;
  const ScalarField split(g, DomainMask::from_inside(g, two));
  CHECK_THROWS(validate(TranslatorProblem{split}));

  std::vector<bool> thin(g.size(), false);
  for (int i = 0; i < g.nx; ++i) thin[g.index(i, 3)] = true;
  CHECK_THROWS(validate(TranslatorProblem{ScalarField(g, DomainMask::from_inside(g, thin))}));

  ScalarField bad(g, DomainMask(g, shape::Rectangle{}));
  bad.at(0, 0) = std::nan("");
  CHECK_THROWS(validate(TranslatorProblem{bad}));

  SolverSettings st;
  st.tol = 0;
  CHECK_THROWS(newton_solve({ScalarField(g, DomainMask(g, shape::Rectangle{}))}, st));
}

TEST_CASE("harmonic extension") {
  const ScalarField b = rect(0.05, [](Point2 x) { return x.x1 * x.x1 - x.x2 * x.x2; });
  const ScalarField u = harmonic_extension({b});
  double m = 0.0;
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      const Point2 x = u.grid.node(i, j);
      m = std::max(m, std::abs(u.at(i, j) - (x.x1 * x.x1 - x.x2 * x.x2)));
    }
  CHECK(m < 1e-10);
}
