#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sgm/error.hpp"

namespace sgm {

/// Doubly periodic rectangle [0,Lx) x [0,Ly) with nx x ny nodes.
struct Grid2D {
  int nx = 0, ny = 0;
  double Lx = 0, Ly = 0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double Lx_, double Ly_) : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_) {
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
      throw Error(ErrorCode::invalid_argument, "grid must have even nx, ny >= 8");
    if (!(Lx > 0) || !(Ly > 0))
      throw Error(ErrorCode::invalid_argument, "grid lengths must be positive");
  }

  double dx() const { return Lx / nx; }
  double dy() const { return Ly / ny; }
  double cell_area() const { return dx() * dy(); }
  double x(int i) const { return i * dx(); }
  double y(int j) const { return j * dy(); }
  std::size_t nodes() const { return static_cast<std::size_t>(nx) * ny; }

  double wrap_x(double x) const { double r = std::fmod(x, Lx); return r < 0 ? r + Lx : r; }
  double wrap_y(double y) const { double r = std::fmod(y, Ly); return r < 0 ? r + Ly : r; }

  /// Signed displacement a->b using the nearest periodic image.
  double min_image_dx(double ax, double bx) const {
    double d = bx - ax;
    d -= Lx * std::round(d / Lx);
    return d;
  }
  double min_image_dy(double ay, double by) const {
    double d = by - ay;
    d -= Ly * std::round(d / Ly);
    return d;
  }

  bool operator==(const Grid2D& o) const {
    return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
  }
  bool operator!=(const Grid2D& o) const { return !(*this == o); }
};

enum class FieldKind { scalar = 0, density = 1, one_form = 2, vector = 3 };

inline int components(FieldKind k) {
  return (k == FieldKind::scalar || k == FieldKind::density) ? 1 : 2;
}

/// Nodal field on a Grid2D. Storage is row-major with y as the outer index
/// and interleaved components: v[(j*nx + i)*comps + c].
class Field {
 public:
  Field() = default;
  Field(const Grid2D& grid, FieldKind kind, double fill = 0.0)
      : grid_(grid), kind_(kind),
        v_(grid.nodes() * components(kind), fill) {}

  const Grid2D& grid() const { return grid_; }
  FieldKind kind() const { return kind_; }
  int comps() const { return components(kind_); }
  std::size_t size() const { return v_.size(); }

  double& at(int i, int j, int c = 0) {
    return v_[(static_cast<std::size_t>(j) * grid_.nx + i) * comps() + c];
  }
  double at(int i, int j, int c = 0) const {
    return v_[(static_cast<std::size_t>(j) * grid_.nx + i) * comps() + c];
  }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  /// Reinterpret the same values under another kind with equal component count.
  Field as_kind(FieldKind k) const {
    if (components(k) != comps())
      throw Error(ErrorCode::unsupported_kind, "component count mismatch in kind cast");
    Field f = *this;
    f.kind_ = k;
    return f;
  }

  bool divergence_free = false;  // set by the stream-function solver

 private:
  Grid2D grid_;
  FieldKind kind_ = FieldKind::scalar;
  std::vector<double> v_;
};

using VectorField = Field;  // kind == FieldKind::vector

inline void require_same_grid(const Field& a, const Field& b) {
  if (a.grid() != b.grid()) throw Error(ErrorCode::grid_mismatch, "fields live on different grids");
}

inline void require_kind(const Field& f, FieldKind k, const char* what) {
  if (f.kind() != k) throw Error(ErrorCode::unsupported_kind, what);
}

}  // namespace sgm
