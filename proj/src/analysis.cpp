#include "translab/analysis.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "translab/bessel.hpp"
#include "translab/solver.hpp"

namespace translab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

GraphCircle graph_circle(const HeightSampler& u, Point2 center, double rho, int n) {
  if (n < 16) throw ResolutionError("graph_circle: need at least 16 samples");
  GraphCircle gc;
  gc.curve.closed = true;
  for (int k = 0; k < n; ++k) {
    const double th = kTwoPi * k / n;
    const Point2 x{center.x1 + rho * std::cos(th), center.x2 + rho * std::sin(th)};
    const auto j = u(x);
    if (!j) throw DomainError("graph_circle: circle leaves the domain");
    gc.theta.push_back(th);
    gc.jets.push_back(*j);
    gc.curve.points.push_back({x.x1, x.x2, j->value});
  }
  return gc;
}

// ---------------------------------------------------------------- slicing

SliceResult coarea_slice(const HeightSampler& u, double r1, double r2, int n_candidates,
                         Point2 center, int n_samples) {
  if (n_candidates < 8) throw std::invalid_argument("coarea_slice: need >= 8 candidates");
  if (!(r2 > r1) || !(r1 > 0)) throw std::invalid_argument("coarea_slice: bad window");
  SliceResult res;
  double best = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (int k = 0; k < n_candidates; ++k) {
    const double rho = r1 + (r2 - r1) * k / (n_candidates - 1);
    GraphCircle gc;
    try {
      gc = graph_circle(u, center, rho, n_samples);
    } catch (const DomainError&) {
      continue;
    }
    std::vector<double> a2(gc.jets.size());
    for (std::size_t i = 0; i < a2.size(); ++i)
      a2[i] = curvature_at(gc.jets[i].grad, gc.jets[i].hess).norm_a2;
    const double e = line_integral(a2, gc.curve);
    res.candidates.emplace_back(rho, e);
    sum += e;
    if (e < best) {
      best = e;
      res.rho = rho;
      res.curve = gc.curve;
      res.line_energy = e;
    }
  }
  if (res.candidates.empty()) throw DomainError("coarea_slice: every candidate leaves the domain");
  res.budget = sum / static_cast<double>(res.candidates.size());
  return res;
}

// ---------------------------------------------------------------- Gauss-Bonnet

GeodesicCurvature geodesic_curvature(const HeightSampler& u, Point2 center, double rho,
                                     int n_samples, bool reverse) {
  if (n_samples < 64) throw ResolutionError("geodesic_curvature: need >= 64 samples");
  const GraphCircle gc = graph_circle(u, center, rho, n_samples);
  GeodesicCurvature out;
  out.kappa_g.resize(gc.jets.size());
  for (std::size_t k = 0; k < gc.jets.size(); ++k) {
    const double th = gc.theta[k];
    const auto& [value, p, D] = gc.jets[k];
    const double t1 = -rho * std::sin(th), t2 = rho * std::cos(th);
    const double s1 = -rho * std::cos(th), s2 = -rho * std::sin(th);
    const double X1[3] = {t1, t2, p.x1 * t1 + p.x2 * t2};
    const double X2[3] = {s1, s2,
                          D.xx * t1 * t1 + 2 * D.xy * t1 * t2 + D.yy * t2 * t2 +
                              p.x1 * s1 + p.x2 * s2};
    const double W = std::sqrt(1 + p.x1 * p.x1 + p.x2 * p.x2);
    const double n[3] = {-p.x1 / W, -p.x2 / W, 1.0 / W};
    const double c[3] = {n[1] * X1[2] - n[2] * X1[1], n[2] * X1[0] - n[0] * X1[2],
                         n[0] * X1[1] - n[1] * X1[0]};
    const double speed = std::sqrt(X1[0] * X1[0] + X1[1] * X1[1] + X1[2] * X1[2]);
    const double kg = (X2[0] * c[0] + X2[1] * c[1] + X2[2] * c[2]) / (speed * speed * speed);
    out.kappa_g[k] = reverse ? -kg : kg;
  }
  out.curve = gc.curve;
  out.integral = line_integral(out.kappa_g, out.curve);
  return out;
}

GaussBonnetAudit gauss_bonnet_audit(const HeightSampler& u, Point2 center, double r_in,
                                    double r_out, Topology topo, double h, int n_samples) {
  const int circles = r_in > 0 ? 2 : 1;
  if (topo.m1 < 1 || topo.genus < 0 || topo.m0 < 0 || topo.m0 != circles)
    throw std::invalid_argument("gauss_bonnet_audit: inconsistent topology");
  if (!(r_out > r_in) || r_in < 0)
    throw std::invalid_argument("gauss_bonnet_audit: bad radii");
  GaussBonnetAudit a;
  // Interior: int K W r dr dtheta.
  const int panels = std::max(1, static_cast<int>(std::ceil((r_out - r_in) / 0.25)));
  const int nt = n_samples;
  auto ring = [&](double r) {
    double s = 0.0;
    for (int k = 0; k < nt; ++k) {
      const double th = kTwoPi * k / nt;
      const auto j = u({center.x1 + r * std::cos(th), center.x2 + r * std::sin(th)});
      if (!j) throw DomainError("gauss_bonnet_audit: region leaves the domain");
      const PointCurvature c = curvature_at(j->grad, j->hess);
      s += c.K * c.W;
    }
    return s * r * kTwoPi / nt;
  };
  for (int p = 0; p < panels; ++p) {
    const double a0 = r_in + (r_out - r_in) * p / panels;
    const double a1 = r_in + (r_out - r_in) * (p + 1) / panels;
    a.interior += boost::math::quadrature::gauss<double, 10>::integrate(ring, a0, a1);
  }
  a.boundary = geodesic_curvature(u, center, r_out, n_samples).integral;
  if (r_in > 0) a.boundary += geodesic_curvature(u, center, r_in, n_samples, true).integral;
  a.euler = kTwoPi * (2 * topo.m1 - 2 * topo.genus - topo.m0);
  a.defect = a.interior + a.boundary - a.euler;
  a.tolerance = std::max(1e-3, 10 * h);
  a.pass = std::abs(a.defect) <= a.tolerance;
  return a;
}

// ---------------------------------------------------------------- blow-down

bool BlowdownSequence::monotone() const {
  for (std::size_t k = 1; k < scales.size(); ++k)
    if (sup_u[k] > sup_u[k - 1] || sup_du[k] > sup_du[k - 1]) return false;
  return true;
}

BlowdownSequence blowdown(const HeightSampler& u, const std::vector<double>& scales,
                          double m, int n_r, int n_theta) {
  if (!(m > 1)) throw std::invalid_argument("blowdown: annulus parameter must exceed 1");
  for (std::size_t k = 0; k < scales.size(); ++k)
    if (!(scales[k] > 0) || (k > 0 && !(scales[k] < scales[k - 1])))
      throw std::invalid_argument("blowdown: scales must be positive and decreasing");
  BlowdownSequence seq;
  seq.m = m;
  for (double lam : scales) {
    double su = 0.0, sd = 0.0;
    std::size_t miss = 0;
    for (int a = 0; a < n_r; ++a) {
      const double r = 1.0 / m + (m - 1.0 / m) * a / (n_r - 1);
      for (int b = 0; b < n_theta; ++b) {
        const double th = kTwoPi * b / n_theta;
        const auto j = u({r * std::cos(th) / lam, r * std::sin(th) / lam});
        if (!j) {
          ++miss;
          continue;
        }
        su = std::max(su, lam * std::abs(j->value));
        sd = std::max(sd, std::hypot(j->grad.x1, j->grad.x2));
      }
    }
    seq.scales.push_back(lam);
    seq.sup_u.push_back(su);
    seq.sup_du.push_back(sd);
    seq.undefined.push_back(miss);
    seq.truncated = seq.truncated || miss > 0;
  }
  return seq;
}

// ---------------------------------------------------------------- decay fits

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("fit_line: degenerate abscissae");
  LinearFit f;
  f.samples = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = y[k] - f.intercept - f.slope * x[k];
    ss += e * e;
  }
  f.rms = std::sqrt(ss / n);
  f.slope_width = n > 2 ? 2.0 * std::sqrt(ss / (n - 2) / sxx) : kNaN;
  return f;
}

DecayFit decay_fit_ray_samples(const std::vector<double>& s, const std::vector<double>& v) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < s.size() && k < v.size(); ++k)
    if (std::abs(v[k]) > 1e-14 && std::isfinite(v[k])) {
      xs.push_back(s[k]);
      ys.push_back(std::log(std::abs(v[k])));
    }
  if (xs.size() < 20) throw std::invalid_argument("decay_fit: fewer than 20 usable samples");
  const LinearFit f = fit_line(xs, ys);
  DecayFit d;
  d.mode = "ray";
  d.samples = xs.size();
  d.mu = -f.slope;
  d.amplitude = std::exp(f.intercept);
  d.rms = f.rms;
  d.width = f.slope_width;
  return d;
}

DecayFit decay_fit_ray(const HeightSampler& u, Point2 dir, Point2 offset, double s0,
                       double s1, int n) {
  const double len = norm(dir);
  if (!(len > 0) || !(s1 > s0) || n < 2) throw std::invalid_argument("decay_fit: bad ray");
  std::vector<double> s, v;
  for (int k = 0; k < n; ++k) {
    const double t = s0 + (s1 - s0) * k / (n - 1);
    const auto j = u({offset.x1 + t * dir.x1 / len, offset.x2 + t * dir.x2 / len});
    if (!j) continue;
    s.push_back(t);
    v.push_back(j->value);
  }
  return decay_fit_ray_samples(s, v);
}

DecayFit decay_fit_radial(const HeightSampler& u, double r0, double r1, double alpha,
                          int n_r, int n_theta) {
  if (!(r1 > r0) || !(r0 > 0) || !(alpha > 4))
    throw std::invalid_argument("decay_fit: bad radial window");
  const double half_sector = std::numbers::pi / 12;  // 15 degrees each side of -e1
  struct Sample {
    double r, x1, v;
  };
  std::vector<Sample> samples;
  for (int a = 0; a < n_r; ++a) {
    const double r = r0 + (r1 - r0) * a / (n_r - 1);
    for (int b = 0; b < n_theta; ++b) {
      const double th = -std::numbers::pi + kTwoPi * (b + 0.5) / n_theta;
      if (std::abs(th) > std::numbers::pi - half_sector) continue;
      const Point2 x{r * std::cos(th), r * std::sin(th)};
      const auto j = u(x);
      if (!j || !(std::abs(j->value) > 1e-14)) continue;
      samples.push_back({r, x.x1, std::abs(j->value)});
    }
  }
  if (samples.size() < 20) throw std::invalid_argument("decay_fit: fewer than 20 usable samples");
  auto log_profile = [](double r, double x1) {
    return -0.25 * x1 + 0.5 * (std::log(k0_scaled(0.5 * r)) - 0.5 * r);
  };
  std::vector<double> lr, lu, lb;
  for (const Sample& s : samples) {
    lr.push_back(std::log(s.r));
    lu.push_back(std::log(s.v));
    lb.push_back(std::log(s.v) - log_profile(s.r, s.x1));
  }
  const LinearFit pw = fit_line(lr, lu);
  const LinearFit bs = fit_line(lr, lb);
  DecayFit d;
  d.mode = "radial";
  d.samples = samples.size();
  d.beta = -pw.slope;
  d.power_rms = pw.rms;
  d.q = bs.slope;
  d.bessel_rms = bs.rms;
  d.better = bs.rms <= pw.rms ? "bessel" : "power";
  // Envelope P = r^{1/alpha} e^{-x1/4} sqrt(K0(r/2)), in log form.
  const double split = r0 + 0.25 * (r1 - r0);
  double c_env = 0.0;
  for (const Sample& s : samples)
    if (s.r < split)
      c_env = std::max(c_env, std::log(s.v) - std::log(s.r) / alpha - log_profile(s.r, s.x1));
  d.envelope = std::exp(c_env);
  double excess = -std::numeric_limits<double>::infinity();
  for (const Sample& s : samples)
    excess = std::max(excess,
                      std::log(s.v) - std::log(s.r) / alpha - log_profile(s.r, s.x1) - c_env);
  d.envelope_excess = std::exp(excess);
  d.compliant = d.envelope_excess <= 1.05;
  return d;
}

// ---------------------------------------------------------------- max principle

namespace {

void require_converged(const ScalarField& u, double cap) {
  const ScalarField r = residual(u);
  double m = 0.0;
  for (std::size_t k = 0; k < r.values.size(); ++k)
    if (r.mask.kind(k) == NodeKind::Interior) m = std::max(m, std::abs(r.values[k]));
  if (!(m <= cap))
    throw std::invalid_argument("max-principle audit: input is not a converged solution");
}

}  // namespace

GradientAudit weak_gradient_audit(const ScalarField& u, double residual_cap) {
  require_converged(u, residual_cap);
  const auto g = gradient(u);
  const ScalarField* comp[2] = {&g.d1, &g.d2};
  GradientAudit a;
  const double inf = std::numeric_limits<double>::infinity();
  for (int c = 0; c < 2; ++c) {
    a.interior_max[c] = a.boundary_max[c] = -inf;
    a.interior_min[c] = a.boundary_min[c] = inf;
    for (std::size_t k = 0; k < u.values.size(); ++k) {
      const NodeKind kind = u.mask.kind(k);
      if (kind == NodeKind::Outside) continue;
      const double v = comp[c]->values[k];
      if (kind == NodeKind::Interior) {
        a.interior_max[c] = std::max(a.interior_max[c], v);
        a.interior_min[c] = std::min(a.interior_min[c], v);
      } else {
        a.boundary_max[c] = std::max(a.boundary_max[c], v);
        a.boundary_min[c] = std::min(a.boundary_min[c], v);
      }
    }
    a.excess = std::max({a.excess, a.interior_max[c] - a.boundary_max[c],
                         a.boundary_min[c] - a.interior_min[c]});
  }
  a.tolerance = 10 * u.grid.h * u.grid.h;
  a.pass = a.excess <= a.tolerance;
  return a;
}

SubsolutionAudit subsolution_audit(const ScalarField& u, double residual_cap) {
  require_converged(u, residual_cap);
  const GridSpec& g = u.grid;
  const auto du = gradient(u);
  const auto square = [](double x) { return x * x; };
  const auto cl = linearize(u, CoefficientFlavor::GradientL);
  const ScalarField lv[2] = {apply_operator(cl, du.d1.map(square)),
                             apply_operator(cl, du.d2.map(square))};
  const ScalarField q =
      apply_operator(linearize(u, CoefficientFlavor::Quasilinear), u.map(square));
  const double inf = std::numeric_limits<double>::infinity();
  SubsolutionAudit a;
  a.min_l_v2[0] = a.min_l_v2[1] = a.min_q_u2 = inf;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!u.mask.interior(i, j)) continue;
      const std::size_t k = g.index(i, j);
      a.min_q_u2 = std::min(a.min_q_u2, q.values[k]);
      bool second = true;
      for (int dj = -1; dj <= 1 && second; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (!u.mask.interior(i + di, j + dj)) second = false;
      if (!second) continue;
      ++a.nodes;
      a.min_l_v2[0] = std::min(a.min_l_v2[0], lv[0].values[k]);
      a.min_l_v2[1] = std::min(a.min_l_v2[1], lv[1].values[k]);
      const double p2 = square(du.d1.values[k]) + square(du.d2.values[k]);
      a.closed_form_gap = std::max(a.closed_form_gap, std::abs(q.values[k] - 2 * p2));
      a.printed_gap = std::max(a.printed_gap,
                               std::abs(q.values[k] - 2 * (1 + p2) * p2 - 2 * p2 * p2));
    }
  a.tolerance = 10 * g.h * g.h;
  a.pass = a.nodes > 0 && a.min_q_u2 >= -a.tolerance && a.min_l_v2[0] >= -a.tolerance &&
           a.min_l_v2[1] >= -a.tolerance && a.closed_form_gap <= a.tolerance;
  return a;
}

ComparisonAudit comparison_audit(const ScalarField& u1, const ScalarField& u2,
                                 double residual_cap) {
  if (!(u1.grid == u2.grid) || u1.values.size() != u2.values.size())
    throw std::invalid_argument("comparison_audit: fields on different grids");
  require_converged(u1, residual_cap);
  require_converged(u2, residual_cap);
  ComparisonAudit a;
  a.tolerance = 10 * u1.grid.h * u1.grid.h;
  a.min_gap = a.boundary_min_gap = std::numeric_limits<double>::infinity();
  const GridSpec& g = u1.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!u1.mask.inside(i, j)) continue;
      const double gap = u2.at(i, j) - u1.at(i, j);
      const bool bdy = u1.mask.kind(i, j) == NodeKind::Boundary;
      if (bdy) {
        if (gap < -1e-14)
          throw std::invalid_argument("comparison_audit: boundary data are not ordered");
        a.boundary_min_gap = std::min(a.boundary_min_gap, gap);
      }
      if (gap < a.min_gap) {
        a.min_gap = gap;
        a.min_location = g.node(i, j);
        a.min_on_boundary = bdy;
      }
    }
  if (a.boundary_min_gap > a.tolerance)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (u1.mask.interior(i, j) && u2.at(i, j) - u1.at(i, j) < a.tolerance)
          a.touching.push_back(g.node(i, j));
  a.pass = a.min_gap >= -a.tolerance && a.touching.empty();
  return a;
}

}  // namespace translab
