#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sgm/grid.hpp"

namespace sgm {

/// Small trigonometric sums evaluated exactly at arbitrary points, with exact
/// derivatives. The verification oracles sample these instead of grid
/// interpolants so the only residual left is the one under test.
struct TrigMode {
  int kx = 0, ky = 0;
  double amp_cos = 0, amp_sin = 0;
};

struct FourierScalar {
  double Lx = 2 * M_PI, Ly = 2 * M_PI;
  double constant = 0;
  std::vector<TrigMode> modes;

  double value(double x, double y) const {
    double s = constant;
    for (const auto& m : modes) {
      double th = 2 * M_PI * (m.kx * x / Lx + m.ky * y / Ly);
      s += m.amp_cos * std::cos(th) + m.amp_sin * std::sin(th);
    }
    return s;
  }

  void gradient(double x, double y, double* gx, double* gy) const {
    *gx = 0;
    *gy = 0;
    for (const auto& m : modes) {
      double ax = 2 * M_PI * m.kx / Lx, ay = 2 * M_PI * m.ky / Ly;
      double th = ax * x + ay * y;
      double d = -m.amp_cos * std::sin(th) + m.amp_sin * std::cos(th);
      *gx += ax * d;
      *gy += ay * d;
    }
  }

  void hessian(double x, double y, double* hxx, double* hxy, double* hyy) const {
    *hxx = 0;
    *hxy = 0;
    *hyy = 0;
    for (const auto& m : modes) {
      double ax = 2 * M_PI * m.kx / Lx, ay = 2 * M_PI * m.ky / Ly;
      double th = ax * x + ay * y;
      double d2 = -(m.amp_cos * std::cos(th) + m.amp_sin * std::sin(th));
      *hxx += ax * ax * d2;
      *hxy += ax * ay * d2;
      *hyy += ay * ay * d2;
    }
  }

  Field sample(const Grid2D& grid, FieldKind kind = FieldKind::scalar) const {
    Field f(grid, kind);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) f.at(i, j) = value(grid.x(i), grid.y(j));
    return f;
  }

  FourierScalar scaled(double s) const {
    FourierScalar out = *this;
    out.constant *= s;
    for (auto& m : out.modes) {
      m.amp_cos *= s;
      m.amp_sin *= s;
    }
    return out;
  }

  static FourierScalar random(double Lx, double Ly, int kmax, std::uint64_t seed,
                              double amplitude = 1.0) {
    FourierScalar f;
    f.Lx = Lx;
    f.Ly = Ly;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (int ky = -kmax; ky <= kmax; ++ky)
      for (int kx = 0; kx <= kmax; ++kx) {
        if (kx == 0 && ky <= 0) continue;
        double decay = amplitude / (1.0 + kx * kx + ky * ky);
        f.modes.push_back({kx, ky, decay * gauss(rng), decay * gauss(rng)});
      }
    return f;
  }
};

/// Divergence-free velocity u = (d_y psi, -d_x psi) from an analytic stream
/// function, with the exact Jacobian.
struct StreamVelocity {
  FourierScalar psi;

  void value(double x, double y, double* ux, double* uy) const {
    double gx, gy;
    psi.gradient(x, y, &gx, &gy);
    *ux = gy;
    *uy = -gx;
  }

  /// J[r][c] = d u_r / d x_c.
  void jacobian(double x, double y, double J[2][2]) const {
    double hxx, hxy, hyy;
    psi.hessian(x, y, &hxx, &hxy, &hyy);
    J[0][0] = hxy;
    J[0][1] = hyy;
    J[1][0] = -hxx;
    J[1][1] = -hxy;
  }

  VectorField sample(const Grid2D& grid) const {
    VectorField u(grid, FieldKind::vector);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        double ux, uy;
        value(grid.x(i), grid.y(j), &ux, &uy);
        u.at(i, j, 0) = ux;
        u.at(i, j, 1) = uy;
      }
    u.divergence_free = true;
    return u;
  }
};

/// Analytic one-form with exact component derivatives.
struct FourierOneForm {
  FourierScalar a0, a1;

  void value(double x, double y, double* v0, double* v1) const {
    *v0 = a0.value(x, y);
    *v1 = a1.value(x, y);
  }

  Field sample(const Grid2D& grid) const {
    Field f(grid, FieldKind::one_form);
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        f.at(i, j, 0) = a0.value(grid.x(i), grid.y(j));
        f.at(i, j, 1) = a1.value(grid.x(i), grid.y(j));
      }
    return f;
  }
};

inline double lie_scalar_at(const StreamVelocity& u, const FourierScalar& f, double x, double y) {
  double ux, uy, gx, gy;
  u.value(x, y, &ux, &uy);
  f.gradient(x, y, &gx, &gy);
  return ux * gx + uy * gy;
}

inline void lie_one_form_at(const StreamVelocity& u, const FourierOneForm& a, double x, double y,
                            double* out0, double* out1) {
  double ux, uy;
  u.value(x, y, &ux, &uy);
  double J[2][2];
  u.jacobian(x, y, J);
  double g0x, g0y, g1x, g1y;
  a.a0.gradient(x, y, &g0x, &g0y);
  a.a1.gradient(x, y, &g1x, &g1y);
  double v0 = a.a0.value(x, y), v1 = a.a1.value(x, y);
  *out0 = ux * g0x + uy * g0y + v0 * J[0][0] + v1 * J[1][0];
  *out1 = ux * g1x + uy * g1y + v0 * J[0][1] + v1 * J[1][1];
}

}  // namespace sgm
