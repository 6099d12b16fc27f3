#include "translab/grid.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

namespace translab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

GridSpec::GridSpec(Point2 origin_, double h_, int nx_, int ny_)
    : origin(origin_), h(h_), nx(nx_), ny(ny_) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("GridSpec: spacing must be positive");
  if (nx < 3 || ny < 3)
    throw std::invalid_argument("GridSpec: need at least 3 nodes per axis");
}

GridSpec GridSpec::covering(double x1_min, double x1_max, double x2_min,
                            double x2_max, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("GridSpec: spacing must be positive");
  const double c1 = (x1_max - x1_min) / h;
  const double c2 = (x2_max - x2_min) / h;
  const double r1 = std::round(c1), r2 = std::round(c2);
  if (std::abs(c1 - r1) > 1e-9 * std::max(1.0, c1) ||
      std::abs(c2 - r2) > 1e-9 * std::max(1.0, c2))
    throw std::invalid_argument("GridSpec::covering: extent not a multiple of h");
  return GridSpec({x1_min, x2_min}, h, static_cast<int>(r1) + 1,
                  static_cast<int>(r2) + 1);
}

GridSpec GridSpec::refined(int factor) const {
  if (factor < 1) throw std::invalid_argument("refined: factor must be >= 1");
  return GridSpec(origin, h / factor, (nx - 1) * factor + 1,
                  (ny - 1) * factor + 1);
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  return a.origin.x1 == b.origin.x1 && a.origin.x2 == b.origin.x2 &&
         a.h == b.h && a.nx == b.nx && a.ny == b.ny;
}

// ---------------------------------------------------------------------------
// shapes

bool shape_contains(const Shape& s, Point2 p) {
  constexpr double slack = 1e-12;
  return std::visit(
      [&](const auto& sh) -> bool {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, shape::Rectangle>) {
          return true;
        } else if constexpr (std::is_same_v<T, shape::Annulus>) {
          const double r = norm({p.x1 - sh.center.x1, p.x2 - sh.center.x2});
          return r >= sh.r_in * (1 - slack) && r <= sh.r_out * (1 + slack);
        } else if constexpr (std::is_same_v<T, shape::Disk>) {
          const double r = norm({p.x1 - sh.center.x1, p.x2 - sh.center.x2});
          return r <= sh.r * (1 + slack);
        } else if constexpr (std::is_same_v<T, shape::HalfPlane>) {
          return p.x1 >= sh.m - slack * std::max(1.0, std::abs(sh.m));
        } else if constexpr (std::is_same_v<T, shape::BallComplement>) {
          const double r = norm({p.x1 - sh.center.x1, p.x2 - sh.center.x2});
          return r >= sh.r0 * (1 - slack);
        } else {
          const double r = norm({p.x1 - sh.m, p.x2});
          return r <= sh.s * (1 + slack) &&
                 p.x1 >= sh.m - slack * std::max(1.0, std::abs(sh.m));
        }
      },
      s);
}

std::string describe(const Shape& s) {
  return std::visit(
      [](const auto& sh) -> std::string {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, shape::Rectangle>) {
          return "rectangle";
        } else if constexpr (std::is_same_v<T, shape::Annulus>) {
          return "annulus(" + num(sh.r_in) + "," + num(sh.r_out) + "," +
                 num(sh.center.x1) + "," + num(sh.center.x2) + ")";
        } else if constexpr (std::is_same_v<T, shape::Disk>) {
          return "disk(" + num(sh.r) + "," + num(sh.center.x1) + "," +
                 num(sh.center.x2) + ")";
        } else if constexpr (std::is_same_v<T, shape::HalfPlane>) {
          return "halfplane(" + num(sh.m) + ")";
        } else if constexpr (std::is_same_v<T, shape::BallComplement>) {
          return "ballcomplement(" + num(sh.r0) + "," + num(sh.center.x1) +
                 "," + num(sh.center.x2) + ")";
        } else {
          return "semidisk(" + num(sh.s) + "," + num(sh.m) + ")";
        }
      },
      s);
}

Shape parse_shape(const std::string& text) {
  const auto open = text.find('(');
  const std::string name = text.substr(0, open);
  std::vector<double> args;
  if (open != std::string::npos) {
    const auto close = text.rfind(')');
    if (close == std::string::npos || close < open || close + 1 != text.size())
      throw std::invalid_argument("malformed shape descriptor '" + text + "'");
    std::stringstream ss(text.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad number '" + tok + "' in shape '" + text + "'");
      }
      if (used != tok.size())
        throw std::invalid_argument("bad number '" + tok + "' in shape '" + text + "'");
      args.push_back(v);
    }
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument("shape '" + name + "' expects " +
                                  std::to_string(n) + " arguments");
  };
  auto positive = [&](double r) {
    if (!(r > 0))
      throw std::invalid_argument("shape '" + text + "' needs a positive radius");
  };
  if (name == "rectangle") {
    need(0);
    return shape::Rectangle{};
  }
  if (name == "annulus") {
    need(4);
    positive(args[0]);
    if (!(args[1] > args[0]))
      throw std::invalid_argument("shape '" + text + "' needs r_in < r_out");
    return shape::Annulus{args[0], args[1], {args[2], args[3]}};
  }
  if (name == "disk") {
    need(3);
    positive(args[0]);
    return shape::Disk{args[0], {args[1], args[2]}};
  }
  if (name == "halfplane") {
    need(1);
    return shape::HalfPlane{args[0]};
  }
  if (name == "ballcomplement") {
    need(3);
    positive(args[0]);
    return shape::BallComplement{args[0], {args[1], args[2]}};
  }
  if (name == "semidisk") {
    need(2);
    positive(args[0]);
    return shape::SemiDisk{args[0], args[1]};
  }
  throw std::invalid_argument("unknown shape '" + name + "'");
}

// ---------------------------------------------------------------------------
// masks

namespace {

bool has_axis_stencil(const std::vector<bool>& in, int nx, int ny, int i,
                      int j, int di, int dj) {
  auto at = [&](int s) {
    const int a = i + s * di, b = j + s * dj;
    return a >= 0 && b >= 0 && a < nx && b < ny &&
           in[static_cast<std::size_t>(b) * nx + a];
  };
  return (at(-1) && at(1)) || (at(1) && at(2)) || (at(-1) && at(-2));
}

}  // namespace

DomainMask::DomainMask(const GridSpec& grid, Shape shape)
    : nx_(grid.nx), ny_(grid.ny), shape_(std::move(shape)) {
  std::vector<bool> in(grid.size());
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i)
      in[grid.index(i, j)] = shape_contains(shape_, grid.node(i, j));
  // Prune nodes without a three-point difference along some axis.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < nx_; ++i) {
        const std::size_t k = grid.index(i, j);
        if (!in[k]) continue;
        if (!has_axis_stencil(in, nx_, ny_, i, j, 1, 0) ||
            !has_axis_stencil(in, nx_, ny_, i, j, 0, 1)) {
          in[k] = false;
          changed = true;
        }
      }
  }
  classify(in);
}

DomainMask DomainMask::from_inside(const GridSpec& grid,
                                   const std::vector<bool>& inside,
                                   Shape descriptor) {
  if (inside.size() != grid.size())
    throw std::invalid_argument("DomainMask::from_inside: size mismatch");
  DomainMask m;
  m.nx_ = grid.nx;
  m.ny_ = grid.ny;
  m.shape_ = std::move(descriptor);
  m.classify(inside);
  return m;
}

void DomainMask::classify(const std::vector<bool>& in) {
  kinds_.assign(in.size(), NodeKind::Outside);
  auto at = [&](int a, int b) {
    return a >= 0 && b >= 0 && a < nx_ && b < ny_ &&
           in[static_cast<std::size_t>(b) * nx_ + a];
  };
  for (int j = 0; j < ny_; ++j)
    for (int i = 0; i < nx_; ++i) {
      if (!at(i, j)) continue;
      bool full = true;
      for (int b = -1; b <= 1 && full; ++b)
        for (int a = -1; a <= 1; ++a)
          if (!at(i + a, j + b)) {
            full = false;
            break;
          }
      kinds_[static_cast<std::size_t>(j) * nx_ + i] =
          full ? NodeKind::Interior : NodeKind::Boundary;
    }
}

std::size_t DomainMask::count(NodeKind k) const {
  return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), k));
}

// ---------------------------------------------------------------------------
// fields

ScalarField::ScalarField(GridSpec g, DomainMask m)
    : grid(g), mask(std::move(m)), values(g.size(), kNaN) {
  if (mask.nx() != grid.nx || mask.ny() != grid.ny)
    throw std::invalid_argument("ScalarField: mask does not match grid");
  for (std::size_t k = 0; k < values.size(); ++k)
    if (mask.kind(k) != NodeKind::Outside) values[k] = 0.0;
}

double ScalarField::sup_abs(bool include_boundary) const {
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const NodeKind nk = mask.kind(k);
    if (nk == NodeKind::Interior || (include_boundary && nk == NodeKind::Boundary))
      s = std::max(s, std::abs(values[k]));
  }
  return s;
}

namespace {

double axial_first(const ScalarField& f, int i, int j, int di, int dj) {
  const auto& m = f.mask;
  const double h = f.grid.h;
  auto in = [&](int s) { return m.inside(i + s * di, j + s * dj); };
  auto v = [&](int s) { return f.at(i + s * di, j + s * dj); };
  if (in(-1) && in(1)) return (v(1) - v(-1)) / (2 * h);
  if (in(1) && in(2)) return (-3 * v(0) + 4 * v(1) - v(2)) / (2 * h);
  if (in(-1) && in(-2)) return (3 * v(0) - 4 * v(-1) + v(-2)) / (2 * h);
  throw StencilError("no first-difference stencil at node (" +
                     std::to_string(i) + "," + std::to_string(j) + ")");
}

double axial_second(const ScalarField& f, int i, int j, int di, int dj) {
  const auto& m = f.mask;
  const double h2 = f.grid.h * f.grid.h;
  auto in = [&](int s) { return m.inside(i + s * di, j + s * dj); };
  auto v = [&](int s) { return f.at(i + s * di, j + s * dj); };
  if (in(-1) && in(1)) return (v(1) - 2 * v(0) + v(-1)) / h2;
  if (in(1) && in(2) && in(3))
    return (2 * v(0) - 5 * v(1) + 4 * v(2) - v(3)) / h2;
  if (in(-1) && in(-2) && in(-3))
    return (2 * v(0) - 5 * v(-1) + 4 * v(-2) - v(-3)) / h2;
  if (in(1) && in(2)) return (v(0) - 2 * v(1) + v(2)) / h2;
  if (in(-1) && in(-2)) return (v(0) - 2 * v(-1) + v(-2)) / h2;
  throw StencilError("no second-difference stencil at node (" +
                     std::to_string(i) + "," + std::to_string(j) + ")");
}

}  // namespace

Gradient gradient(const ScalarField& f) {
  Gradient g{ScalarField(f.grid, f.mask), ScalarField(f.grid, f.mask)};
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) {
      if (!f.mask.inside(i, j)) continue;
      g.d1.at(i, j) = axial_first(f, i, j, 1, 0);
      g.d2.at(i, j) = axial_first(f, i, j, 0, 1);
    }
  return g;
}

Hessian hessian(const ScalarField& f) {
  const Gradient g = gradient(f);
  Hessian out{ScalarField(f.grid, f.mask), ScalarField(f.grid, f.mask),
              ScalarField(f.grid, f.mask)};
  const double h2 = f.grid.h * f.grid.h;
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) {
      const NodeKind k = f.mask.kind(i, j);
      if (k == NodeKind::Outside) continue;
      out.d11.at(i, j) = axial_second(f, i, j, 1, 0);
      out.d22.at(i, j) = axial_second(f, i, j, 0, 1);
      if (k == NodeKind::Interior) {
        out.d12.at(i, j) = (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) -
                            f.at(i - 1, j + 1) + f.at(i - 1, j - 1)) /
                           (4 * h2);
      } else {
        out.d12.at(i, j) = 0.5 * (axial_first(g.d2, i, j, 1, 0) +
                                  axial_first(g.d1, i, j, 0, 1));
      }
    }
  return out;
}

Quadrature integrate(const ScalarField& f, const ScalarField* weight) {
  if (weight && !(weight->grid == f.grid))
    throw std::invalid_argument("integrate: weight on a different grid");
  const auto& m = f.mask;
  const double cell = f.grid.h * f.grid.h / 4.0;
  auto val = [&](int i, int j) {
    const double w = weight ? weight->at(i, j) : 1.0;
    return f.at(i, j) * w;
  };
  Quadrature q;
  bool any = false;
  for (int j = 0; j + 1 < f.grid.ny; ++j)
    for (int i = 0; i + 1 < f.grid.nx; ++i) {
      if (!m.inside(i, j) || !m.inside(i + 1, j) || !m.inside(i, j + 1) ||
          !m.inside(i + 1, j + 1))
        continue;
      if (weight && (!weight->mask.inside(i, j) || !weight->mask.inside(i + 1, j) ||
                     !weight->mask.inside(i, j + 1) ||
                     !weight->mask.inside(i + 1, j + 1)))
        continue;
      any = true;
      q.value += cell * (val(i, j) + val(i + 1, j) + val(i, j + 1) +
                         val(i + 1, j + 1));
    }
  q.empty = !any;
  return q;
}

double line_integral(std::span<const double> f, const Curve& curve) {
  if (!curve.closed)
    throw std::invalid_argument("line_integral: curve is not closed");
  std::vector<Point3> p = curve.points;
  if (p.size() >= 2) {
    const Point3 a = p.front(), b = p.back();
    const double gap = std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
    const double scale = std::hypot(p[1].x - a.x, p[1].y - a.y, p[1].z - a.z);
    if (gap <= 1e-12 * scale) p.pop_back();
  }
  const std::size_t n = p.size();
  if (n < 16) throw ResolutionError("line_integral: need at least 16 samples");
  if (f.size() != n && f.size() != curve.points.size())
    throw std::invalid_argument("line_integral: sample count mismatch");
  static constexpr std::array<double, 7> w = {-1.0, 9.0, -45.0, 0.0,
                                              45.0, -9.0, 1.0};
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double dx = 0, dy = 0, dz = 0;
    for (int s = -3; s <= 3; ++s) {
      const auto idx = (static_cast<long>(k) + s + static_cast<long>(n)) %
                       static_cast<long>(n);
      const Point3& q = p[static_cast<std::size_t>(idx)];
      const double c = w[static_cast<std::size_t>(s + 3)];
      dx += c * q.x;
      dy += c * q.y;
      dz += c * q.z;
    }
    sum += f[k] * std::hypot(dx, dy, dz) / 60.0;
  }
  return sum;
}

std::optional<double> interpolate(const ScalarField& f, Point2 p) {
  const GridSpec& g = f.grid;
  const double s = (p.x1 - g.origin.x1) / g.h;
  const double t = (p.x2 - g.origin.x2) / g.h;
  if (s < -1e-9 || t < -1e-9 || s > g.nx - 1 + 1e-9 || t > g.ny - 1 + 1e-9)
    return std::nullopt;
  int i = std::clamp(static_cast<int>(std::floor(s)), 0, g.nx - 2);
  int j = std::clamp(static_cast<int>(std::floor(t)), 0, g.ny - 2);
  if (!f.mask.inside(i, j) || !f.mask.inside(i + 1, j) ||
      !f.mask.inside(i, j + 1) || !f.mask.inside(i + 1, j + 1))
    return std::nullopt;
  const double a = s - i, b = t - j;
  return (1 - a) * (1 - b) * f.at(i, j) + a * (1 - b) * f.at(i + 1, j) +
         (1 - a) * b * f.at(i, j + 1) + a * b * f.at(i + 1, j + 1);
}

}  // namespace translab
