#include "sgm/flowmap.hpp"

namespace sgm {

FlowMap2D::FlowMap2D(const Grid2D& grid)
    : grid_(grid), px_(grid, FieldKind::scalar), py_(grid, FieldKind::scalar) {
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      px_.at(i, j) = grid.x(i);
      py_.at(i, j) = grid.y(j);
    }
}

void FlowMap2D::advance(const VectorField* drift, double dt, const VectorField* noise_disp,
                        const MidpointOptions& opt) {
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      auto [nx, ny] = midpoint_point_update(px_.at(i, j), py_.at(i, j), drift, dt, noise_disp, opt);
      px_.at(i, j) = nx;
      py_.at(i, j) = ny;
    }
}

Field FlowMap2D::pullback_scalar(const Field& f) const {
  if (f.comps() != 1) throw Error(ErrorCode::unsupported_kind, "scalar pull-back needs one component");
  Field out(grid_, f.kind());
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      double v;
      interpolate_at(f, px_.at(i, j), py_.at(i, j), &v);
      out.at(i, j) = v;
    }
  return out;
}

void FlowMap2D::jacobian(Field& dgx_dx, Field& dgx_dy, Field& dgy_dx, Field& dgy_dy) const {
  Spectral sp(grid_);
  // g(X) = X + d(X) with d periodic; differentiate d and add the identity.
  std::vector<double> dx_plane(grid_.nodes()), dy_plane(grid_.nodes());
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      std::size_t n = static_cast<std::size_t>(j) * grid_.nx + i;
      dx_plane[n] = px_.at(i, j) - grid_.x(i);
      dy_plane[n] = py_.at(i, j) - grid_.y(j);
    }
  dgx_dx = Field(grid_, FieldKind::scalar);
  dgx_dy = Field(grid_, FieldKind::scalar);
  dgy_dx = Field(grid_, FieldKind::scalar);
  dgy_dy = Field(grid_, FieldKind::scalar);
  auto ddx_dx = sp.deriv_x(dx_plane), ddx_dy = sp.deriv_y(dx_plane);
  auto ddy_dx = sp.deriv_x(dy_plane), ddy_dy = sp.deriv_y(dy_plane);
  for (std::size_t n = 0; n < grid_.nodes(); ++n) {
    dgx_dx.data()[n] = 1.0 + ddx_dx[n];
    dgx_dy.data()[n] = ddx_dy[n];
    dgy_dx.data()[n] = ddy_dx[n];
    dgy_dy.data()[n] = 1.0 + ddy_dy[n];
  }
}

Field FlowMap2D::pullback_one_form(const Field& alpha) const {
  require_kind(alpha, FieldKind::one_form, "one-form pull-back");
  Field jxx, jxy, jyx, jyy;
  jacobian(jxx, jxy, jyx, jyy);
  Field out(grid_, FieldKind::one_form);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      double a[2];
      interpolate_at(alpha, px_.at(i, j), py_.at(i, j), a);
      std::size_t n = static_cast<std::size_t>(j) * grid_.nx + i;
      out.data()[2 * n] = a[0] * jxx.data()[n] + a[1] * jyx.data()[n];
      out.data()[2 * n + 1] = a[0] * jxy.data()[n] + a[1] * jyy.data()[n];
    }
  return out;
}

}  // namespace sgm
