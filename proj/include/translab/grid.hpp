// grid.hpp
//
// Structured grids over the plane spanned by e1 (the translation direction)
// and e2, node masks for the staircase domains used throughout, and the
// finite-difference / quadrature kernels every other module builds on.
//
// Conventions: node (i, j) sits at origin + (i h, j h); storage is row-major
// with j as the row index, so index(i, j) = j * nx + i. Values at OUTSIDE
// nodes are NaN.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace translab {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline double norm(Point2 p) { return std::hypot(p.x1, p.x2); }

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Symmetric 2x2 tensor, stored as its three independent entries.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Raised when a derivative stencil cannot be formed from inside nodes.
class StencilError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input lies outside an operation's domain of definition.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a requested feature is below the grid resolution.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Uniform isotropic node lattice. nx, ny count nodes.
struct GridSpec {
  Point2 origin;
  double h = 1.0;
  int nx = 3;
  int ny = 3;

  GridSpec() = default;
  GridSpec(Point2 origin_, double h_, int nx_, int ny_);

  /// Grid whose nodes cover [x1_min, x1_max] x [x2_min, x2_max] at spacing h;
  /// the extents must be integer multiples of h (to within 1e-9 cells).
  static GridSpec covering(double x1_min, double x1_max, double x2_min,
                           double x2_max, double h);

  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(i);
  }
  [[nodiscard]] double x1(int i) const { return origin.x1 + i * h; }
  [[nodiscard]] double x2(int j) const { return origin.x2 + j * h; }
  [[nodiscard]] Point2 node(int i, int j) const { return {x1(i), x2(j)}; }
  [[nodiscard]] bool in_range(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny;
  }
  /// Same physical extent, spacing divided by `factor`.
  [[nodiscard]] GridSpec refined(int factor) const;
};

bool operator==(const GridSpec& a, const GridSpec& b);

enum class NodeKind : std::uint8_t { Outside = 0, Boundary = 1, Interior = 2 };

namespace shape {
struct Rectangle {};
struct Annulus {
  double r_in = 0.0;
  double r_out = 1.0;
  Point2 center;
};
/// Closed disk; annulus with r_in = 0 but kept distinct for readability.
struct Disk {
  double r = 1.0;
  Point2 center;
};
/// {x1 >= m}.
struct HalfPlane {
  double m = 0.0;
};
/// Complement of the open ball of radius r0.
struct BallComplement {
  double r0 = 1.0;
  Point2 center;
};
/// Disk of radius s about (m, 0) intersected with {x1 >= m}.
struct SemiDisk {
  double s = 1.0;
  double m = 0.0;
};
}  // namespace shape

using Shape = std::variant<shape::Rectangle, shape::Annulus, shape::Disk,
                           shape::HalfPlane, shape::BallComplement,
                           shape::SemiDisk>;

bool shape_contains(const Shape& s, Point2 p);
std::string describe(const Shape& s);
/// Inverse of describe(); throws std::invalid_argument on malformed text.
Shape parse_shape(const std::string& text);

/// Per-node classification of a staircase domain on a Cartesian grid.
///
/// A node is inside when its position lies in the shape. Inside nodes that
/// cannot support a three-point difference along both axes are discarded
/// until the set is stable. INTERIOR nodes are inside nodes whose full 3x3
/// neighbourhood is inside; the remaining inside nodes are BOUNDARY.
class DomainMask {
 public:
  DomainMask() = default;
  DomainMask(const GridSpec& grid, Shape shape);

  /// Classify an explicit inside-set (no pruning); used for file-defined and
  /// synthetic masks.
  static DomainMask from_inside(const GridSpec& grid,
                                const std::vector<bool>& inside,
                                Shape descriptor = shape::Rectangle{});

  [[nodiscard]] NodeKind kind(int i, int j) const {
    return kinds_[static_cast<std::size_t>(j) * nx_ + i];
  }
  [[nodiscard]] NodeKind kind(std::size_t k) const { return kinds_[k]; }
  [[nodiscard]] bool inside(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ &&
           kind(i, j) != NodeKind::Outside;
  }
  [[nodiscard]] bool interior(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ &&
           kind(i, j) == NodeKind::Interior;
  }
  [[nodiscard]] const Shape& shape() const { return shape_; }
  [[nodiscard]] std::size_t count(NodeKind k) const;
  [[nodiscard]] int nx() const { return nx_; }
  [[nodiscard]] int ny() const { return ny_; }

 private:
  void classify(const std::vector<bool>& inside);

  int nx_ = 0;
  int ny_ = 0;
  Shape shape_ = shape::Rectangle{};
  std::vector<NodeKind> kinds_;
};

/// Grid-sampled scalar with a domain mask; NaN on OUTSIDE nodes.
struct ScalarField {
  GridSpec grid;
  DomainMask mask;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(GridSpec g, DomainMask m);  // zero on inside nodes

  template <class F>
  static ScalarField sample(const GridSpec& g, const DomainMask& m, F&& f) {
    ScalarField out(g, m);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        if (m.inside(i, j)) out.at(i, j) = f(g.node(i, j));
    return out;
  }

  [[nodiscard]] double& at(int i, int j) { return values[grid.index(i, j)]; }
  [[nodiscard]] double at(int i, int j) const {
    return values[grid.index(i, j)];
  }
  /// Same grid and mask, values replaced by f(value).
  template <class F>
  [[nodiscard]] ScalarField map(F&& f) const {
    ScalarField out = *this;
    for (std::size_t k = 0; k < values.size(); ++k)
      if (mask.kind(k) != NodeKind::Outside) out.values[k] = f(values[k]);
    return out;
  }
  /// Largest |value| over nodes of the given kinds.
  [[nodiscard]] double sup_abs(bool include_boundary = true) const;
};

struct Gradient {
  ScalarField d1;
  ScalarField d2;
};

struct Hessian {
  ScalarField d11;
  ScalarField d12;
  ScalarField d22;
};

/// Second-order differences: central where both neighbours are inside,
/// three-point one-sided otherwise.
Gradient gradient(const ScalarField& f);
/// Second derivatives. Pure terms: central, else four-point one-sided.
/// Mixed term: four-point diagonal stencil at INTERIOR nodes, symmetrised
/// D1(D2 f), D2(D1 f) composition at BOUNDARY nodes.
Hessian hessian(const ScalarField& f);

struct Quadrature {
  double value = 0.0;
  bool empty = false;  // no complete cell in the masked region
};

/// Cell trapezoid rule over cells whose four corners are inside; with a
/// weight, integrates f * weight.
Quadrature integrate(const ScalarField& f,
                     const ScalarField* weight = nullptr);

/// Closed polygonal curve in R^3 sampled at a uniform parameter step.
struct Curve {
  std::vector<Point3> points;
  bool closed = true;
};

/// Arc-length weighted periodic trapezoid sum of f over a closed curve.
/// Speeds come from sixth-order periodic differences in the parameter, which
/// keeps the sum spectrally accurate for uniformly parametrised smooth curves.
double line_integral(std::span<const double> f, const Curve& curve);

/// Bilinear interpolation; nullopt when a cell corner is outside the mask.
std::optional<double> interpolate(const ScalarField& f, Point2 p);

}  // namespace translab
