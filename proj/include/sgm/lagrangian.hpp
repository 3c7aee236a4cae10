#pragma once

#include "sgm/algebra.hpp"

namespace sgm {

/// Reduced Lagrangian l(u, a) with its variational derivatives and Legendre
/// transform. Finite-dim models are quadratic in u (hyperregular by
/// construction); the fluid model is the kinetic Lagrangian (1/2)int|u|^2
/// with unit reference density.
class LagrangianModel {
 public:
  static LagrangianModel rigid_body(const Vec3& inertia);
  /// Heavy top: l(u,a) = (1/2) u.I.u - mgl <chi, a>.
  static LagrangianModel heavy_top(const Vec3& inertia, double mgl, const Vec3& chi);
  static LagrangianModel euler2d_kinetic();

  Realization realization() const { return realization_; }
  const Vec3& inertia() const { return inertia_; }
  double mgl() const { return mgl_; }
  const Vec3& chi() const { return chi_; }

  // finite-dim interface
  double ell(const Vec3& u, const Vec3& a) const;
  Vec3 momentum(const Vec3& u) const;              // m = dl/du = I u
  Vec3 velocity(const Vec3& m) const;              // inverse Legendre map
  Vec3 dl_da(const Vec3& u, const Vec3& a) const;  // -mgl chi for the top
  Vec3 dh_da(const Vec3& m, const Vec3& a) const;  // +mgl chi for the top
  double hamiltonian(const Vec3& m, const Vec3& a) const;

  // fluid interface (rho = 1): m = flat(u), h = (1/2)int|u|^2
  Field momentum(const VectorField& u) const;
  VectorField velocity_from_momentum(const Field& m) const;
  double ell(const VectorField& u) const;

 private:
  Realization realization_ = Realization::rigid_body;
  Vec3 inertia_{1, 1, 1};
  double mgl_ = 0;
  Vec3 chi_{0, 0, 1};
};

/// Stochastic Legendre transform drift value: m = dl/du and
/// h(m, a) = <m, u> - l(u, a).
struct LegendreResult {
  Vec3 m;
  double hamiltonian_drift;
};

LegendreResult legendre_transform(const LagrangianModel& L, const Vec3& u, const Vec3& a);

}  // namespace sgm
