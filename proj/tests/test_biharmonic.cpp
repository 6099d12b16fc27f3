#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "translab/barriers.hpp"
#include "translab/biharmonic.hpp"

using namespace translab;

namespace {

double max_dev(const BiharmonicResult& b, auto f) {
  double m = 0.0;
  for (int j = 0; j < b.w.grid.ny; ++j)
    for (int i = 0; i < b.w.grid.nx; ++i)
      if (b.in_disk.at(i, j) == 1.0) m = std::max(m, std::abs(b.w.at(i, j) - f(b.w.grid.node(i, j))));
  return m;
}

HeightSampler polynomial(double c0, double c1, double c11) {
  return [=](Point2 x) -> std::optional<Jet> {
    return Jet{c0 + c1 * x.x1 + c11 * x.x1 * x.x1, {c1 + 2 * c11 * x.x1, 0}, {2 * c11, 0, 0}};
  };
}

// lambda u(x / lambda)
HeightSampler rescaled(const HeightSampler& u, double lambda) {
  return [=](Point2 x) -> std::optional<Jet> {
    const auto j = u({x.x1 / lambda, x.x2 / lambda});
    if (!j) return std::nullopt;
    return Jet{lambda * j->value, j->grad,
               {j->hess.xx / lambda, j->hess.xy / lambda, j->hess.yy / lambda}};
  };
}

}  // namespace

TEST_CASE("constants and linear data are reproduced") {
  const Point2 c{0.3, -0.2};
  CHECK(max_dev(biharmonic_solve(polynomial(2.5, 0, 0), c, 1.0, 0.05),
                [](Point2) { return 2.5; }) <= 1e-12);
  CHECK(max_dev(biharmonic_solve(polynomial(0, 1, 0), c, 1.0, 0.05),
                [](Point2 x) { return x.x1; }) <= 1e-12);
}

TEST_CASE("quadratic data against a finer grid") {
  const Point2 c{0, 0};
  const auto coarse = biharmonic_solve(polynomial(0, 0, 1), c, 1.0, 0.1);
  const auto fine = biharmonic_solve(polynomial(0, 0, 1), c, 1.0, 0.025);
  double m = 0.0;
  for (int j = 0; j < coarse.w.grid.ny; ++j)
    for (int i = 0; i < coarse.w.grid.nx; ++i)
      if (coarse.in_disk.at(i, j) == 1.0)
        m = std::max(m, std::abs(coarse.w.at(i, j) - *interpolate(fine.w, coarse.w.grid.node(i, j))));
  CHECK(m <= 1e-6);
  CHECK(coarse.linear_residual < 1e-10);
}

TEST_CASE("hessian energy of a quadratic") {
  // |D^2 x1^2|^2 = 4 over a disk of radius 1.
  const auto b = biharmonic_solve(polynomial(0, 0, 1), {0, 0}, 1.0, 0.01);
  CHECK(hessian_energy(b) == doctest::Approx(4 * M_PI).epsilon(0.02));
}

TEST_CASE("energy check on planar data is undefined") {
  const auto plane = polynomial(1, 0.5, 0);
  const auto b = biharmonic_solve(plane, {0, 0}, 1.0, 0.05);
  const EnergyCheck e = biharmonic_energy_check(b, plane);
  CHECK(e.lhs < 1e-12);
  CHECK(e.rhs == 0.0);
  CHECK(e.undefined);
  CHECK_FALSE(e.flagged);
  CHECK(std::isnan(e.fitted_c));
}

TEST_CASE("energy ratio of the exact end") {
  const HeightSampler end = sampler_from(ExactSolution(exact::ExpEnd{0.5, 0}));
  const EnergyCheck a = biharmonic_energy_check(biharmonic_solve(end, {5, 0}, 4.0, 0.1), end);
  const EnergyCheck b = biharmonic_energy_check(biharmonic_solve(end, {5, 0}, 4.0, 0.05), end);
  REQUIRE(std::isfinite(a.fitted_c));
  CHECK(std::abs(b.fitted_c / a.fitted_c - 1) < 0.1);

  // lambda u(x / lambda): both sides scale by lambda^0.
  const double lambda = 2.0;
  const HeightSampler big = rescaled(end, lambda);
  const EnergyCheck s = biharmonic_energy_check(
      biharmonic_solve(big, {5 * lambda, 0}, 4.0 * lambda, 0.05 * lambda), big);
  CHECK(s.fitted_c == doctest::Approx(b.fitted_c).epsilon(1e-6));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(biharmonic_solve(polynomial(0, 0, 0), {0, 0}, 0.1, 0.05), ResolutionError);
  const HeightSampler end = sampler_from(ExactSolution(exact::ExpEnd{0.5, 0}));
  CHECK_THROWS_AS(biharmonic_solve(end, {0, 0}, 2.0, 0.1), DomainError);
}
