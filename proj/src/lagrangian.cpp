#include "sgm/lagrangian.hpp"

#include <cmath>

namespace sgm {

LagrangianModel LagrangianModel::rigid_body(const Vec3& inertia) {
  if (!(inertia.x > 0 && inertia.y > 0 && inertia.z > 0))
    throw Error(ErrorCode::singular_parameters, "principal inertias must be positive");
  LagrangianModel L;
  L.realization_ = Realization::rigid_body;
  L.inertia_ = inertia;
  return L;
}

LagrangianModel LagrangianModel::heavy_top(const Vec3& inertia, double mgl, const Vec3& chi) {
  if (!(inertia.x > 0 && inertia.y > 0 && inertia.z > 0))
    throw Error(ErrorCode::singular_parameters, "principal inertias must be positive");
  LagrangianModel L;
  L.realization_ = Realization::heavy_top;
  L.inertia_ = inertia;
  L.mgl_ = mgl;
  L.chi_ = chi;
  return L;
}

LagrangianModel LagrangianModel::euler2d_kinetic() {
  LagrangianModel L;
  L.realization_ = Realization::euler2d;
  return L;
}

double LagrangianModel::ell(const Vec3& u, const Vec3& a) const {
  double kin = 0.5 * (inertia_.x * u.x * u.x + inertia_.y * u.y * u.y + inertia_.z * u.z * u.z);
  if (realization_ == Realization::heavy_top) return kin - mgl_ * dot(chi_, a);
  return kin;
}

Vec3 LagrangianModel::momentum(const Vec3& u) const {
  return {inertia_.x * u.x, inertia_.y * u.y, inertia_.z * u.z};
}

Vec3 LagrangianModel::velocity(const Vec3& m) const {
  return {m.x / inertia_.x, m.y / inertia_.y, m.z / inertia_.z};
}

Vec3 LagrangianModel::dl_da(const Vec3&, const Vec3&) const {
  if (realization_ != Realization::heavy_top) return {0, 0, 0};
  return chi_ * (-mgl_);
}

Vec3 LagrangianModel::dh_da(const Vec3&, const Vec3&) const {
  if (realization_ != Realization::heavy_top) return {0, 0, 0};
  return chi_ * mgl_;
}

double LagrangianModel::hamiltonian(const Vec3& m, const Vec3& a) const {
  double kin = 0.5 * (m.x * m.x / inertia_.x + m.y * m.y / inertia_.y + m.z * m.z / inertia_.z);
  if (realization_ == Realization::heavy_top) return kin + mgl_ * dot(chi_, a);
  return kin;
}

Field LagrangianModel::momentum(const VectorField& u) const {
  return flat(u);
}

VectorField LagrangianModel::velocity_from_momentum(const Field& m) const {
  return sharp(m);
}

double LagrangianModel::ell(const VectorField& u) const {
  double s = 0;
  for (double v : u.data()) s += v * v;
  return 0.5 * s * u.grid().cell_area();
}

LegendreResult legendre_transform(const LagrangianModel& L, const Vec3& u, const Vec3& a) {
  if (L.realization() == Realization::euler2d)
    throw Error(ErrorCode::unsupported_realization, "use the field overloads for the fluid model");
  Vec3 m = L.momentum(u);
  double h = dot(m, u) - L.ell(u, a);
  return {m, h};
}

}  // namespace sgm
