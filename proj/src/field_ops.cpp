#include "sgm/field_ops.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace sgm {

std::vector<double> plane_of(const Field& f, int c) {
  std::vector<double> p(f.grid().nodes());
  const int comps = f.comps();
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = f.data()[n * comps + c];
  return p;
}

void set_plane(Field& f, int c, const std::vector<double>& plane) {
  const int comps = f.comps();
  for (std::size_t n = 0; n < plane.size(); ++n) f.data()[n * comps + c] = plane[n];
}

namespace {

struct VectorPlanes {
  std::vector<double> ux, uy;
  std::vector<double> dux_dx, dux_dy, duy_dx, duy_dy;
};

VectorPlanes velocity_planes(const VectorField& u, bool with_jacobian) {
  Spectral sp(u.grid());
  VectorPlanes v;
  v.ux = plane_of(u, 0);
  v.uy = plane_of(u, 1);
  if (with_jacobian) {
    v.dux_dx = sp.deriv_x(v.ux);
    v.dux_dy = sp.deriv_y(v.ux);
    v.duy_dx = sp.deriv_x(v.uy);
    v.duy_dy = sp.deriv_y(v.uy);
  }
  return v;
}

}  // namespace

Field lie_derivative(const VectorField& u, const Field& T) {
  require_same_grid(u, T);
  require_kind(u, FieldKind::vector, "transport field must be a vector field");
  Spectral sp(T.grid());
  Field out(T.grid(), T.kind());

  switch (T.kind()) {
    case FieldKind::scalar: {
      auto f = plane_of(T, 0);
      auto fx = sp.deriv_x(f), fy = sp.deriv_y(f);
      auto v = velocity_planes(u, false);
      for (std::size_t n = 0; n < f.size(); ++n)
        out.data()[n] = v.ux[n] * fx[n] + v.uy[n] * fy[n];
      return out;
    }
    case FieldKind::density: {
      auto f = plane_of(T, 0);
      auto v = velocity_planes(u, false);
      std::vector<double> fux(f.size()), fuy(f.size());
      for (std::size_t n = 0; n < f.size(); ++n) {
        fux[n] = f[n] * v.ux[n];
        fuy[n] = f[n] * v.uy[n];
      }
      auto dx = sp.deriv_x(fux), dy = sp.deriv_y(fuy);
      for (std::size_t n = 0; n < f.size(); ++n) out.data()[n] = dx[n] + dy[n];
      return out;
    }
    case FieldKind::one_form: {
      auto a0 = plane_of(T, 0), a1 = plane_of(T, 1);
      auto a0x = sp.deriv_x(a0), a0y = sp.deriv_y(a0);
      auto a1x = sp.deriv_x(a1), a1y = sp.deriv_y(a1);
      auto v = velocity_planes(u, true);
      for (std::size_t n = 0; n < a0.size(); ++n) {
        double c0 = v.ux[n] * a0x[n] + v.uy[n] * a0y[n] + a0[n] * v.dux_dx[n] + a1[n] * v.duy_dx[n];
        double c1 = v.ux[n] * a1x[n] + v.uy[n] * a1y[n] + a0[n] * v.dux_dy[n] + a1[n] * v.duy_dy[n];
        out.data()[2 * n] = c0;
        out.data()[2 * n + 1] = c1;
      }
      return out;
    }
    case FieldKind::vector: {
      auto w0 = plane_of(T, 0), w1 = plane_of(T, 1);
      auto w0x = sp.deriv_x(w0), w0y = sp.deriv_y(w0);
      auto w1x = sp.deriv_x(w1), w1y = sp.deriv_y(w1);
      auto v = velocity_planes(u, true);
      for (std::size_t n = 0; n < w0.size(); ++n) {
        double c0 = v.ux[n] * w0x[n] + v.uy[n] * w0y[n] - (w0[n] * v.dux_dx[n] + w1[n] * v.dux_dy[n]);
        double c1 = v.ux[n] * w1x[n] + v.uy[n] * w1y[n] - (w0[n] * v.duy_dx[n] + w1[n] * v.duy_dy[n]);
        out.data()[2 * n] = c0;
        out.data()[2 * n + 1] = c1;
      }
      return out;
    }
  }
  throw Error(ErrorCode::unsupported_kind, "unknown field kind");
}

VectorField velocity_from_vorticity(const Field& omega, double mean_tol) {
  require_kind(omega, FieldKind::scalar, "vorticity must be a scalar field");
  Spectral sp(omega.grid());
  auto w = plane_of(omega, 0);
  double m = sp.mean(w);
  double scale = 0;
  for (double v : w) scale = std::max(scale, std::abs(v));
  if (std::abs(m) > mean_tol * std::max(1.0, scale)) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "vorticity mean %.3e violates torus solvability", m);
    throw Error(ErrorCode::nonzero_mean, buf);
  }
  auto psi = sp.inverse_laplacian_neg(w);
  auto px = sp.deriv_x(psi), py = sp.deriv_y(psi);
  VectorField u(omega.grid(), FieldKind::vector);
  for (std::size_t n = 0; n < w.size(); ++n) {
    u.data()[2 * n] = py[n];
    u.data()[2 * n + 1] = -px[n];
  }
  u.divergence_free = true;
  return u;
}

Field curl(const VectorField& u) {
  require_kind(u, FieldKind::vector, "curl expects a vector field");
  Spectral sp(u.grid());
  auto duy_dx = sp.deriv_x(plane_of(u, 1));
  auto dux_dy = sp.deriv_y(plane_of(u, 0));
  Field out(u.grid(), FieldKind::scalar);
  for (std::size_t n = 0; n < duy_dx.size(); ++n) out.data()[n] = duy_dx[n] - dux_dy[n];
  return out;
}

Field divergence(const VectorField& u) {
  require_kind(u, FieldKind::vector, "divergence expects a vector field");
  Spectral sp(u.grid());
  auto dx = sp.deriv_x(plane_of(u, 0));
  auto dy = sp.deriv_y(plane_of(u, 1));
  Field out(u.grid(), FieldKind::scalar);
  for (std::size_t n = 0; n < dx.size(); ++n) out.data()[n] = dx[n] + dy[n];
  return out;
}

VectorField gradient(const Field& f) {
  if (f.comps() != 1) throw Error(ErrorCode::unsupported_kind, "gradient expects a 1-component field");
  Spectral sp(f.grid());
  auto p = plane_of(f, 0);
  auto px = sp.deriv_x(p), py = sp.deriv_y(p);
  VectorField out(f.grid(), FieldKind::vector);
  for (std::size_t n = 0; n < p.size(); ++n) {
    out.data()[2 * n] = px[n];
    out.data()[2 * n + 1] = py[n];
  }
  return out;
}

namespace {

inline void cubic_weights(double t, double w[4]) {
  // Lagrange cubic through offsets {-1, 0, 1, 2}.
  w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
  w[1] = (t * t - 1.0) * (t - 2.0) * 0.5;
  w[2] = -t * (t + 1.0) * (t - 2.0) * 0.5;
  w[3] = t * (t * t - 1.0) / 6.0;
}

inline int wrap_index(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace

void interpolate_at(const Field& T, double x, double y, double* out) {
  const Grid2D& g = T.grid();
  double gx = g.wrap_x(x) / g.dx();
  double gy = g.wrap_y(y) / g.dy();
  int i0 = static_cast<int>(std::floor(gx));
  int j0 = static_cast<int>(std::floor(gy));
  double tx = gx - i0, ty = gy - j0;
  double wx[4], wy[4];
  cubic_weights(tx, wx);
  cubic_weights(ty, wy);
  int ii[4], jj[4];
  for (int k = 0; k < 4; ++k) {
    ii[k] = wrap_index(i0 - 1 + k, g.nx);
    jj[k] = wrap_index(j0 - 1 + k, g.ny);
  }
  const int comps = T.comps();
  for (int c = 0; c < comps; ++c) out[c] = 0;
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) {
      double w = wx[a] * wy[b];
      for (int c = 0; c < comps; ++c) out[c] += w * T.at(ii[a], jj[b], c);
    }
}

std::vector<double> interpolate(const Field& T, const std::vector<std::pair<double, double>>& pts) {
  std::vector<double> out(pts.size() * T.comps());
  for (std::size_t p = 0; p < pts.size(); ++p)
    interpolate_at(T, pts[p].first, pts[p].second, out.data() + p * T.comps());
  return out;
}

double integrate_domain(const Field& T) {
  if (T.comps() != 1)
    throw Error(ErrorCode::unsupported_kind, "integrate_domain expects a 1-component field");
  double s = 0;
  for (double v : T.data()) s += v;
  return s * T.grid().cell_area();
}

Field flat(const VectorField& u) {
  require_kind(u, FieldKind::vector, "flat expects a vector field");
  return u.as_kind(FieldKind::one_form);
}

VectorField sharp(const Field& one_form) {
  require_kind(one_form, FieldKind::one_form, "sharp expects a one-form");
  return one_form.as_kind(FieldKind::vector);
}

double quadrature_pair(const Field& a, const Field& b) {
  require_same_grid(a, b);
  if (a.comps() != b.comps())
    throw Error(ErrorCode::unsupported_kind, "pairing requires equal component counts");
  double s = 0;
  for (std::size_t n = 0; n < a.data().size(); ++n) s += a.data()[n] * b.data()[n];
  return s * a.grid().cell_area();
}

double max_abs(const Field& f) {
  double m = 0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const Field& f) {
  double s = 0;
  for (double v : f.data()) s += v * v;
  return std::sqrt(s * f.grid().cell_area());
}

Field axpy(double alpha, const Field& x, const Field& y) {
  require_same_grid(x, y);
  Field out = y;
  for (std::size_t n = 0; n < out.data().size(); ++n) out.data()[n] += alpha * x.data()[n];
  return out;
}

Field ep_momentum_source(const Field& dl_da, const Field& a) {
  require_same_grid(dl_da, a);
  if (a.comps() != 1)
    throw Error(ErrorCode::unsupported_kind, "advected quantity must be scalar-valued");
  VectorField grad_v(dl_da.grid(), FieldKind::vector);
  if (dl_da.kind() == FieldKind::scalar) {
    grad_v = gradient(dl_da);
  } else if (dl_da.kind() == FieldKind::one_form) {
    grad_v = dl_da.as_kind(FieldKind::vector);
  } else {
    throw Error(ErrorCode::unsupported_kind, "dl/da must be a scalar or its gradient one-form");
  }
  Field out(a.grid(), FieldKind::one_form);
  for (std::size_t n = 0; n < a.grid().nodes(); ++n) {
    out.data()[2 * n] = a.data()[n] * grad_v.data()[2 * n];
    out.data()[2 * n + 1] = a.data()[n] * grad_v.data()[2 * n + 1];
  }
  return out;
}

Field taylor_green_vorticity(const Grid2D& grid, double amplitude) {
  Field w(grid, FieldKind::scalar);
  double ax = 2.0 * M_PI / grid.Lx, ay = 2.0 * M_PI / grid.Ly;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      w.at(i, j) = amplitude * std::sin(ax * grid.x(i)) * std::sin(ay * grid.y(j));
  return w;
}

Field random_band_limited_scalar(const Grid2D& grid, int kmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Field f(grid, FieldKind::scalar);
  double ax = 2.0 * M_PI / grid.Lx, ay = 2.0 * M_PI / grid.Ly;
  for (int ky = -kmax; ky <= kmax; ++ky)
    for (int kx = 0; kx <= kmax; ++kx) {
      if (kx == 0 && ky <= 0) continue;  // one representative per conjugate pair, no k=0
      double ac = gauss(rng), as = gauss(rng);
      double decay = 1.0 / (1.0 + kx * kx + ky * ky);
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
          double th = ax * kx * grid.x(i) + ay * ky * grid.y(j);
          f.at(i, j) += decay * (ac * std::cos(th) + as * std::sin(th));
        }
    }
  return f;
}

VectorField random_divfree_velocity(const Grid2D& grid, int kmax, std::uint64_t seed) {
  Field psi = random_band_limited_scalar(grid, kmax, seed);
  Spectral sp(grid);
  auto p = plane_of(psi, 0);
  auto px = sp.deriv_x(p), py = sp.deriv_y(p);
  VectorField u(grid, FieldKind::vector);
  for (std::size_t n = 0; n < p.size(); ++n) {
    u.data()[2 * n] = py[n];
    u.data()[2 * n + 1] = -px[n];
  }
  u.divergence_free = true;
  return u;
}

}  // namespace sgm
