#include "translab/geometry.hpp"

#include <algorithm>
#include <memory>
#include <ostream>

#include "translab/field_io.hpp"

namespace translab {

Direction::Direction(double v1, double v2, double v3) : v1_(v1), v2_(v2) {
  if (v3 != 0.0)
    throw std::invalid_argument("Direction: V must lie in the graph plane");
  if (std::abs(std::hypot(v1, v2) - 1.0) > 1e-12)
    throw std::invalid_argument("Direction: V must be a unit vector");
}

HeightSampler sampler_from(const ScalarField& u) {
  struct Fields {
    ScalarField u, d1, d2, d11, d12, d22;
  };
  auto g = gradient(u);
  auto hs = hessian(u);
  auto f = std::make_shared<const Fields>(Fields{u, std::move(g.d1), std::move(g.d2),
                                                 std::move(hs.d11), std::move(hs.d12),
                                                 std::move(hs.d22)});
  return [f](Point2 p) -> std::optional<Jet> {
    const auto v = interpolate(f->u, p);
    if (!v) return std::nullopt;
    Jet j;
    j.value = *v;
    j.grad = {*interpolate(f->d1, p), *interpolate(f->d2, p)};
    j.hess = {*interpolate(f->d11, p), *interpolate(f->d12, p),
              *interpolate(f->d22, p)};
    return j;
  };
}

PointCurvature curvature_at(Point2 p, Sym2 D) {
  PointCurvature c;
  const double s2 = p.x1 * p.x1 + p.x2 * p.x2;
  c.W = std::sqrt(1.0 + s2);
  // Frame (e, e_perp) with e along Du: there g = diag(W^2, 1).
  double e1 = 1.0, e2 = 0.0;
  if (s2 > 0.0) {
    const double s = std::sqrt(s2);
    e1 = p.x1 / s;
    e2 = p.x2 / s;
  }
  const double Ae1 = D.xx * e1 + D.xy * e2, Ae2 = D.xy * e1 + D.yy * e2;
  const double a = (e1 * Ae1 + e2 * Ae2) / c.W;                   // A(e,e)
  const double b = (-e2 * Ae1 + e1 * Ae2) / c.W;                  // A(e,e_perp)
  const double Ap1 = -D.xx * e2 + D.xy * e1, Ap2 = -D.xy * e2 + D.yy * e1;
  const double cc = (-e2 * Ap1 + e1 * Ap2) / c.W;                 // A(e_perp,e_perp)
  // Symmetric shape operator g^{-1/2} A g^{-1/2} = [[a/W^2, b/W],[b/W, cc]].
  const double m = 0.5 * (a / (c.W * c.W) + cc);
  const double d = 0.5 * (a / (c.W * c.W) - cc);
  const double e = b / c.W;
  const double q = d * d + e * e;
  const double mm = m * m;
  c.H = 2.0 * m;
  c.norm_a2 = 2.0 * mm + 2.0 * q;
  c.K = mm - q;
  return c;
}

GeometryReport shape_report(const ScalarField& u, Direction V) {
  GeometryReport r;
  r.V = V;
  r.u = u;
  auto g = gradient(u);
  auto D = hessian(u);
  const ScalarField blank(u.grid, u.mask);
  r.W = r.A11 = r.A12 = r.A22 = r.H = r.K = r.K_graph = r.norm_a2 = blank;
  r.n1 = r.n2 = r.n3 = r.n_dot_v = blank;
  ScalarField q1 = blank, q2 = blank;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (u.mask.kind(k) == NodeKind::Outside) continue;
    const Point2 p{g.d1.values[k], g.d2.values[k]};
    const Sym2 hs{D.d11.values[k], D.d12.values[k], D.d22.values[k]};
    const PointCurvature c = curvature_at(p, hs);
    r.W.values[k] = c.W;
    r.A11.values[k] = hs.xx / c.W;
    r.A12.values[k] = hs.xy / c.W;
    r.A22.values[k] = hs.yy / c.W;
    r.H.values[k] = c.H;
    r.K.values[k] = c.K;
    r.K_graph.values[k] = (hs.xx * hs.yy - hs.xy * hs.xy) / std::pow(c.W, 4);
    r.norm_a2.values[k] = c.norm_a2;
    r.n1.values[k] = -p.x1 / c.W;
    r.n2.values[k] = -p.x2 / c.W;
    r.n3.values[k] = 1.0 / c.W;
    r.n_dot_v.values[k] = V.v1() * r.n1.values[k] + V.v2() * r.n2.values[k];
    q1.values[k] = p.x1 / c.W;
    q2.values[k] = p.x2 / c.W;
  }
  auto g1 = gradient(q1);
  auto g2 = gradient(q2);
  r.H_div = blank;
  for (std::size_t k = 0; k < u.values.size(); ++k)
    if (u.mask.kind(k) != NodeKind::Outside)
      r.H_div.values[k] = g1.d1.values[k] + g2.d2.values[k];
  r.du1 = std::move(g.d1);
  r.du2 = std::move(g.d2);
  return r;
}

Quadrature total_curvature(const GeometryReport& rep) {
  return integrate(rep.norm_a2, &rep.W);
}

namespace {

bool in_ball(Point2 x, double height, Point3 c, double R) {
  const double dx = x.x1 - c.x, dy = x.x2 - c.y, dz = height - c.z;
  return dx * dx + dy * dy + dz * dz < R * R;
}

}  // namespace

AreaRatio area_ratio(const ScalarField& u, Point3 center, double R) {
  if (!(R > 2 * u.grid.h))
    throw ResolutionError("area_ratio: radius must exceed 2h");
  const auto g = gradient(u);
  ScalarField w(u.grid, u.mask);
  bool hit = false;
  for (int j = 0; j < u.grid.ny; ++j)
    for (int i = 0; i < u.grid.nx; ++i) {
      if (!u.mask.inside(i, j)) continue;
      const bool b = in_ball(u.grid.node(i, j), u.at(i, j), center, R);
      hit = hit || b;
      const double p1 = g.d1.at(i, j), p2 = g.d2.at(i, j);
      w.at(i, j) = b ? std::sqrt(1 + p1 * p1 + p2 * p2) : 0.0;
    }
  AreaRatio a;
  a.empty = !hit;
  a.ratio = hit ? integrate(w).value / (R * R) : 0.0;
  return a;
}

double local_energy(const GeometryReport& rep, Point3 center, double rho) {
  if (!(rho > 2 * rep.u.grid.h))
    throw ResolutionError("local_energy: radius must exceed 2h");
  ScalarField f(rep.u.grid, rep.u.mask);
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i)
      if (f.mask.inside(i, j))
        f.at(i, j) = in_ball(f.grid.node(i, j), rep.u.at(i, j), center, rho)
                         ? rep.norm_a2.at(i, j)
                         : 0.0;
  return integrate(f, &rep.W).value;
}

EckerAudit ecker_audit(const GeometryReport& rep, Point3 center, double rho,
                       double T, int n_times) {
  if (!(rho > 2 * rep.u.grid.h))
    throw ResolutionError("ecker_audit: radius must exceed 2h");
  if (n_times < 2) throw std::invalid_argument("ecker_audit: need >= 2 times");
  const double v1 = rep.V.v1(), v2 = rep.V.v2();
  auto shifted = [&](double t) {
    return Point3{center.x - t * v1, center.y - t * v2, center.z};
  };
  EckerAudit a;
  const double dt = rho * rho / n_times;
  double space_time = 0.0;
  for (int k = 0; k < n_times; ++k) {
    const double t = T - rho * rho + (k + 0.5) * dt;
    const double e = local_energy(rep, shifted(t), rho);
    space_time += e * dt;
    a.sup_energy = std::max(a.sup_energy, e);
  }
  a.rhs = space_time / std::pow(rho, 4);
  const double late = rho * rho / 4;
  for (int k = 0; k <= n_times; ++k) {
    const double t = T - late + late * k / n_times;
    const Point3 c = shifted(t);
    for (int j = 0; j < rep.u.grid.ny; ++j)
      for (int i = 0; i < rep.u.grid.nx; ++i)
        if (rep.u.mask.inside(i, j) &&
            in_ball(rep.u.grid.node(i, j), rep.u.at(i, j), c, rho / 2))
          a.lhs = std::max(a.lhs, rep.norm_a2.at(i, j));
  }
  a.fitted_c = a.rhs > 0 ? a.lhs / a.rhs : kNaN;
  return a;
}

std::vector<DecayRow> decay_probe(const GeometryReport& rep,
                                  const std::vector<double>& radii,
                                  int shell_cells) {
  std::vector<DecayRow> rows;
  const double width = shell_cells * rep.u.grid.h;
  for (double rho : radii) {
    DecayRow row;
    row.rho = rho;
    for (int j = 0; j < rep.u.grid.ny; ++j)
      for (int i = 0; i < rep.u.grid.nx; ++i) {
        if (!rep.u.mask.inside(i, j)) continue;
        const Point2 x = rep.u.grid.node(i, j);
        const double z = rep.u.at(i, j);
        const double dist = std::sqrt(x.x1 * x.x1 + x.x2 * x.x2 + z * z);
        if (dist < rho || dist >= rho + width) continue;
        ++row.nodes;
        const double a = std::sqrt(rep.norm_a2.at(i, j));
        row.sup_a = std::max(row.sup_a, a);
        row.sup_a_sqrt = std::max(row.sup_a_sqrt, a * std::sqrt(dist));
        if (x.x1 * rep.V.v1() + x.x2 * rep.V.v2() > 0)
          row.sup_a_linear_pos = std::max(row.sup_a_linear_pos, a * dist);
        row.sup_nv_sqrt = std::max(row.sup_nv_sqrt,
                                   std::abs(rep.n_dot_v.at(i, j)) * std::sqrt(dist));
      }
    row.empty = row.nodes == 0;
    rows.push_back(row);
  }
  return rows;
}

void write_report_csv(std::ostream& os, const GeometryReport& rep) {
  os << "x1,x2,u,W,H,H_div,K,K_graph,normA2,n1,n2,n3,nV\n";
  const auto& g = rep.u.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!rep.u.mask.inside(i, j)) continue;
      const std::size_t k = g.index(i, j);
      os << format_double(g.x1(i)) << ',' << format_double(g.x2(j));
      for (const ScalarField* f :
           {&rep.u, &rep.W, &rep.H, &rep.H_div, &rep.K, &rep.K_graph,
            &rep.norm_a2, &rep.n1, &rep.n2, &rep.n3, &rep.n_dot_v})
        os << ',' << format_double(f->values[k]);
      os << '\n';
    }
}

}  // namespace translab
