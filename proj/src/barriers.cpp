#include "translab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "translab/bessel.hpp"
#include "translab/field_io.hpp"

namespace translab {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};

// ---------------------------------------------------------------- exact

ExactSolution::ExactSolution(Kind kind) : kind_(kind) {
  if (const auto* e = std::get_if<exact::ExpEnd>(&kind_))
    if (!(e->C > 0.0) || !std::isfinite(e->C) || !std::isfinite(e->D))
      throw std::invalid_argument("ExpEnd: C must be positive and finite");
}

bool ExactSolution::defined_at(Point2 x) const {
  if (const auto* e = std::get_if<exact::ExpEnd>(&kind_))
    return x.x1 > std::log(e->C);
  return true;
}

Jet ExactSolution::jet(Point2 x) const {
  return std::visit(
      Overload{
          [&](const exact::Plane& p) { return Jet{p.c, {}, {}}; },
          [&](const exact::TiltedPlane& p) {
            return Jet{p.a * x.x2 + p.b, {0.0, p.a}, {}};
          },
          [&](const exact::ExpEnd& e) {
            if (!(x.x1 > std::log(e.C)))
              throw DomainError("ExpEnd: point left of x1 = ln C");
            const double y = e.C * std::exp(-x.x1);
            const double s = 1.0 - y * y;
            Jet j;
            j.value = e.D - std::asin(y);
            j.grad = {y / std::sqrt(s), 0.0};
            j.hess = {-y / (s * std::sqrt(s)), 0.0, 0.0};
            return j;
          }},
      kind_);
}

double ExactSolution::mean_curvature(Point2 x) const {
  if (const auto* e = std::get_if<exact::ExpEnd>(&kind_)) {
    if (!defined_at(x)) throw DomainError("ExpEnd: point left of x1 = ln C");
    return -e->C * std::exp(-x.x1);
  }
  return 0.0;
}

std::string ExactSolution::describe() const {
  return std::visit(
      Overload{[](const exact::Plane& p) { return "plane(" + format_double(p.c) + ")"; },
               [](const exact::TiltedPlane& p) {
                 return "tilted(" + format_double(p.a) + "," + format_double(p.b) + ")";
               },
               [](const exact::ExpEnd& e) {
                 return "expend(" + format_double(e.C) + "," + format_double(e.D) + ")";
               }},
      kind_);
}

ScalarField eval_exact(const ExactSolution& sol, const GridSpec& grid,
                       const DomainMask& mask) {
  return ScalarField::sample(grid, mask, [&](Point2 x) {
    if (!sol.defined_at(x))
      throw DomainError("eval_exact: grid reaches outside the solution's domain");
    return sol.value(x);
  });
}

HeightSampler sampler_from(const ExactSolution& sol) {
  return [sol](Point2 x) -> std::optional<Jet> {
    if (!sol.defined_at(x)) return std::nullopt;
    return sol.jet(x);
  };
}

// ---------------------------------------------------------------- barriers

void validate(const BarrierSpec& spec) {
  auto bessel_ok = [](const barrier::Bessel& b) {
    if (!(b.alpha > 4.0) || !std::isfinite(b.alpha))
      throw std::invalid_argument("Bessel barrier: alpha must exceed 4");
  };
  std::visit(Overload{[](const barrier::Exp& e) {
                        if (!(e.mu > 0.0))
                          throw std::invalid_argument("Exp barrier: rate must be positive");
                      },
                      bessel_ok,
                      [&](const barrier::Composite& c) {
                        bessel_ok(c.bessel);
                        if (!(c.c1 > 0) || !(c.c2 > 0) || !(c.eps > 0) || !(c.n > 0))
                          throw std::invalid_argument(
                              "Composite barrier: constants must be positive");
                      }},
             spec);
}

std::string describe(const BarrierSpec& spec) {
  std::ostringstream os;
  std::visit(Overload{[&](const barrier::Exp& e) { os << "exp(" << format_double(e.mu) << ")"; },
                      [&](const barrier::Bessel& b) {
                        os << "bessel(" << format_double(b.alpha) << ")";
                      },
                      [&](const barrier::Composite& c) {
                        os << "composite(" << format_double(c.c1) << ","
                           << format_double(c.c2) << "," << format_double(c.eps) << ","
                           << format_double(c.n) << "," << format_double(c.bessel.alpha)
                           << ")";
                      }},
             spec);
  return os.str();
}

namespace {

Jet bessel_jet(double alpha, Point2 x) {
  const double r = norm(x);
  if (!(r > 0.0)) throw DomainError("Bessel barrier: undefined at the origin");
  const double s = 2.0 / alpha;
  const double k0s = k0_scaled(0.5 * r);
  const double k1s = k1_scaled(0.5 * r);
  // Radial profile f(r) = r^s K0(r/2), carried with the factor e^{r/2} removed.
  const double rs = std::pow(r, s);
  const double f = rs * k0s;
  const double f1 = s * rs / r * k0s - 0.5 * rs * k1s;
  const double f2 = s * (s - 1) * rs / (r * r) * k0s - s * rs / r * k1s +
                    0.25 * rs * (k0s + 2.0 * k1s / r);
  const double E = std::exp(-0.5 * (x.x1 + r));
  const double c = x.x1 / r, d = x.x2 / r;
  // F(x) = f(|x|), G = e^{-x1/2} (with E absorbing both exponentials).
  const double F1 = f1 * c, F2 = f1 * d;
  const double F11 = f2 * c * c + f1 / r * (1 - c * c);
  const double F12 = f2 * c * d - f1 / r * c * d;
  const double F22 = f2 * d * d + f1 / r * (1 - d * d);
  Jet j;
  j.value = E * f;
  j.grad = {E * (F1 - 0.5 * f), E * F2};
  j.hess = {E * (F11 - F1 + 0.25 * f), E * (F12 - 0.5 * F2), E * F22};
  return j;
}

Jet exp_jet(double mu, double shift, Point2 x) {
  const double v = std::exp(-mu * (x.x1 + shift));
  return Jet{v, {-mu * v, 0.0}, {mu * mu * v, 0.0, 0.0}};
}

}  // namespace

Jet barrier_jet(const BarrierSpec& spec, Point2 x) {
  return std::visit(
      Overload{[&](const barrier::Exp& e) { return exp_jet(e.mu, 0.0, x); },
               [&](const barrier::Bessel& b) { return bessel_jet(b.alpha, x); },
               [&](const barrier::Composite& c) {
                 const Jet p = bessel_jet(c.bessel.alpha, x);
                 const Jet q = exp_jet(0.5, c.n, x);
                 Jet j;
                 j.value = c.c1 * p.value + c.c2 * q.value + c.eps;
                 j.grad = {c.c1 * p.grad.x1 + c.c2 * q.grad.x1, c.c1 * p.grad.x2};
                 j.hess = {c.c1 * p.hess.xx + c.c2 * q.hess.xx, c.c1 * p.hess.xy,
                           c.c1 * p.hess.yy};
                 return j;
               }},
      spec);
}

ScalarField eval_barrier(const BarrierSpec& spec, const GridSpec& grid,
                         const DomainMask& mask) {
  validate(spec);
  return ScalarField::sample(grid, mask,
                             [&](Point2 x) { return barrier_value(spec, x); });
}

// ---------------------------------------------------------------- signs

namespace {

struct StencilJet {
  Point2 grad;
  Sym2 hess;
};

template <class F>
StencilJet nine_point(F&& f, double h) {
  double v[3][3];
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) v[a + 1][b + 1] = f(a, b);
  StencilJet s;
  s.grad = {(v[2][1] - v[0][1]) / (2 * h), (v[1][2] - v[1][0]) / (2 * h)};
  s.hess = {(v[2][1] - 2 * v[1][1] + v[0][1]) / (h * h),
            (v[2][2] - v[2][0] - v[0][2] + v[0][0]) / (4 * h * h),
            (v[1][2] - 2 * v[1][1] + v[1][0]) / (h * h)};
  return s;
}

Coefficients sign_coefficients(SignFlavor flavor, Point2 bg_grad, Sym2 bg_hess,
                               Point2 self_grad) {
  switch (flavor) {
    case SignFlavor::LinearL:
      return gradient_l_coefficients(bg_grad, bg_hess);
    case SignFlavor::QuasilinearQ:
      return quasilinear_coefficients(bg_grad);
    case SignFlavor::QuasilinearSelf:
      return quasilinear_coefficients(self_grad);
  }
  return {};
}

}  // namespace

SignReport supersolution_check(const BarrierSpec& spec, SignFlavor flavor,
                               const ScalarField& background, double r_min,
                               double r_max) {
  validate(spec);
  const GridSpec& g = background.grid;
  const auto bg_grad = gradient(background);
  const auto bg_hess = hessian(background);
  SignReport rep;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!background.mask.interior(i, j)) continue;
      const Point2 x = g.node(i, j);
      const double r = norm(x);
      if (r < r_min || r > r_max) continue;
      const StencilJet s = nine_point(
          [&](int a, int b) { return barrier_value(spec, g.node(i + a, j + b)); }, g.h);
      const Coefficients c = sign_coefficients(
          flavor, {bg_grad.d1.at(i, j), bg_grad.d2.at(i, j)},
          {bg_hess.d11.at(i, j), bg_hess.d12.at(i, j), bg_hess.d22.at(i, j)}, s.grad);
      const double value = apply_nondivergence(c, s.grad, s.hess);
      const double phi = barrier_value(spec, x);
      ++rep.nodes;
      rep.max_value = std::max(rep.max_value, value);
      rep.max_relative = std::max(rep.max_relative, value / phi);
      if (!(value < 0.0)) rep.violations.push_back({x, value});
    }
  if (rep.nodes == 0) throw StencilError("supersolution_check: empty region");
  rep.pass = rep.violations.empty();
  return rep;
}

ScanResult barrier_scan(const BarrierSpec& spec, SignFlavor flavor,
                        const ScanSettings& st, const HeightSampler& background) {
  validate(spec);
  if (!(st.r_min > st.h) || !(st.r_max > st.r_min) || !(st.dr > 0) || st.n_theta < 16)
    throw std::invalid_argument("barrier_scan: invalid scan settings");
  ScanResult res;
  const int n_rings = static_cast<int>(std::floor((st.r_max - st.r_min) / st.dr + 1e-9)) + 1;
  for (int k = 0; k < n_rings; ++k) {
    ScanRing ring;
    ring.r = st.r_min + k * st.dr;
    ring.max_value = ring.max_relative = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < st.n_theta; ++t) {
      const double th = 2.0 * std::numbers::pi * t / st.n_theta;
      const Point2 x{ring.r * std::cos(th), ring.r * std::sin(th)};
      Jet bg;
      if (background) {
        const auto b = background(x);
        if (!b) continue;
        bg = *b;
      }
      Point2 grad;
      Sym2 hess;
      const double phi = barrier_value(spec, x);
      if (st.analytic) {
        const Jet p = barrier_jet(spec, x);
        grad = p.grad;
        hess = p.hess;
      } else {
        const StencilJet s = nine_point(
            [&](int a, int b) {
              return barrier_value(spec, {x.x1 + a * st.h, x.x2 + b * st.h});
            },
            st.h);
        grad = s.grad;
        hess = s.hess;
      }
      const Coefficients c = sign_coefficients(flavor, bg.grad, bg.hess, grad);
      const double value = apply_nondivergence(c, grad, hess);
      ring.max_value = std::max(ring.max_value, value);
      ring.max_relative = std::max(ring.max_relative, value / phi);
    }
    res.rings.push_back(ring);
  }
  int last_bad = -1;
  for (int k = 0; k < n_rings; ++k)
    if (!(res.rings[k].max_value < 0.0)) last_bad = k;
  if (last_bad + 1 < n_rings) {
    res.found = true;
    res.r0 = res.rings[last_bad + 1].r;
    res.max_relative_beyond = -std::numeric_limits<double>::infinity();
    for (int k = last_bad + 1; k < n_rings; ++k)
      res.max_relative_beyond = std::max(res.max_relative_beyond, res.rings[k].max_relative);
  }
  return res;
}

// ---------------------------------------------------------------- comparison

ComparisonReport comparison_check(const ScalarField& u, const barrier::Composite& spec) {
  validate(spec);
  ComparisonReport rep;
  rep.boundary_ok = rep.interior_ok = true;
  rep.margin = rep.limit_margin = std::numeric_limits<double>::infinity();
  const barrier::Bessel b = spec.bessel;
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      if (!u.mask.inside(i, j)) continue;
      const Point2 x = u.grid.node(i, j);
      const double u2 = u.at(i, j) * u.at(i, j);
      const double phi = barrier_value(b, x);
      const double full = spec.c1 * phi + spec.c2 * std::exp(-0.5 * (x.x1 + spec.n)) + spec.eps;
      const double gap = full - u2;
      rep.margin = std::min(rep.margin, gap);
      rep.limit_margin = std::min(rep.limit_margin, spec.c1 * phi + spec.eps - u2);
      if (gap > 0.0) continue;
      rep.interior_ok = false;
      if (u.mask.kind(i, j) == NodeKind::Boundary) rep.boundary_ok = false;
      if (rep.offending.size() < 100) rep.offending.push_back(x);
    }
  return rep;
}

barrier::Composite composite_recipe(const ScalarField& u, double r0, double n,
                                    double eps, double alpha) {
  double m = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k)
    if (u.mask.kind(k) != NodeKind::Outside) m = std::max(m, u.values[k] * u.values[k]);
  const barrier::Bessel b{alpha};
  // Smallest phi on the circle |x| = r0 sits at x = (r0, 0); also take the
  // staircase layer of nodes just outside it.
  double phi_min = barrier_value(b, {r0, 0.0});
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      if (!u.mask.inside(i, j)) continue;
      const Point2 x = u.grid.node(i, j);
      if (norm(x) < r0 + 2 * u.grid.h) phi_min = std::min(phi_min, barrier_value(b, x));
    }
  const double mm = m > 0 ? m : std::numeric_limits<double>::min();
  barrier::Composite c;
  c.c1 = mm / phi_min;
  c.c2 = mm * (1.0 + 1e-3);
  c.eps = eps;
  c.n = n;
  c.bessel = b;
  validate(c);
  return c;
}

}  // namespace translab
