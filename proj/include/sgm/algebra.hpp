#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgm/field_ops.hpp"
#include "sgm/grid.hpp"
#include "sgm/vec3.hpp"

namespace sgm {

enum class Realization { rigid_body, heavy_top, euler2d };

const char* to_string(Realization r);

// ---------------------------------------------------------------------------
// Elements.
//
// Finite-dimensional realizations identify so(3) with R^3 through the hat map
// fixed so that [hat(u), hat(w)] = hat(u x w). The vector-space action used
// throughout is L_u v = u x v; the rigid body carries a trivial vector space.
// The fluid realization stores grid fields: a divergence-free velocity with a
// scalar V-part on the algebra side, a momentum one-form with a scalar
// advected quantity on the dual side.
// ---------------------------------------------------------------------------

struct GridAlgebra {
  VectorField u;  // kind vector, divergence-free
  Field b;        // kind scalar
};

struct GridDual {
  Field m;  // kind one_form
  Field a;  // kind scalar
};

class AlgebraElement {
 public:
  static AlgebraElement rigid(const Vec3& u);
  static AlgebraElement heavy(const Vec3& u, const Vec3& b);
  static AlgebraElement euler(VectorField u, Field b);
  static AlgebraElement zero(Realization r);

  Realization realization() const { return realization_; }
  const Vec3& u() const { return u_; }
  const Vec3& b() const { return b_; }
  const GridAlgebra& grid() const;

 private:
  Realization realization_ = Realization::rigid_body;
  Vec3 u_{}, b_{};
  std::shared_ptr<const GridAlgebra> grid_;
};

class DualElement {
 public:
  static DualElement rigid(const Vec3& m);
  static DualElement heavy(const Vec3& m, const Vec3& a);
  static DualElement euler(Field m, Field a);
  static DualElement zero(Realization r);

  Realization realization() const { return realization_; }
  const Vec3& m() const { return m_; }
  const Vec3& a() const { return a_; }
  const GridDual& grid() const;

 private:
  Realization realization_ = Realization::rigid_body;
  Vec3 m_{}, a_{};
  std::shared_ptr<const GridDual> grid_;
};

/// Semidirect-product group element. Finite-dimensional realizations hold a
/// rotation and a translation slot; the fluid realization exposes the
/// translation subgroup of the torus diffeomorphisms (shift + V-part), which
/// is the part of the group with exact discrete pull-backs.
class GroupElement {
 public:
  static GroupElement rigid(const Mat3& R);
  static GroupElement heavy(const Mat3& R, const Vec3& v);
  static GroupElement euler_translation(const Grid2D& grid, double sx, double sy, Field v);
  static GroupElement identity(Realization r);

  Realization realization() const { return realization_; }
  const Mat3& rotation() const { return R_; }
  const Vec3& v() const { return v_; }
  double shift_x() const { return sx_; }
  double shift_y() const { return sy_; }
  const Field& v_field() const;
  const Grid2D& grid() const;

 private:
  Realization realization_ = Realization::rigid_body;
  Mat3 R_{};
  Vec3 v_{};
  double sx_ = 0, sy_ = 0;
  std::shared_ptr<const Field> v_field_;
  Grid2D grid_{};
  friend GroupElement group_mul(const GroupElement&, const GroupElement&);
};

// --- operations -------------------------------------------------------------

/// <(m,a),(u,b)> = <m,u> + <a,b>; dot products finite-dim, quadrature on grids.
double pair(const DualElement& x, const AlgebraElement& y);

/// (g1,v1) * (g2,v2) = (g1 g2, v2 + (g2)_* v1).
GroupElement group_mul(const GroupElement& p, const GroupElement& q);
GroupElement group_inv(const GroupElement& p);

/// Conjugation p q p^-1.
GroupElement AD(const GroupElement& p, const GroupElement& q);

/// Adjoint action of the group: (g_* u, g^*(b - L_u v)).
AlgebraElement Ad(const GroupElement& p, const AlgebraElement& y);

/// Coadjoint action of the group, the exact dual of Ad:
/// <Ad_star(p^-1, x), y> = <x, Ad(p, y)>.
DualElement Ad_star(const GroupElement& p, const DualElement& x);

/// Adjoint action of the algebra: (-[u,u~], L_u b~ - L_u~ b).
AlgebraElement ad(const AlgebraElement& x, const AlgebraElement& y);

/// Coadjoint action of the algebra, the exact dual of ad:
/// <ad_star(x, y), z> = <y, ad(x, z)>. Components read
/// (L_u m + b<>a, -L_u a) with the conventions documented per realization.
DualElement ad_star(const AlgebraElement& x, const DualElement& y);

/// Diamond for the finite-dimensional vector space: <v<>a, u> = -<a, L_u v>,
/// which closes as v<>a = a x v under L_u v = u x v.
Vec3 diamond(Realization r, const Vec3& v, const Vec3& a);

/// Grid diamond for scalar v in V against scalar a in V*: the one-form -a grad v.
Field diamond(const Field& v, const Field& a);

/// Casimir functionals of the realization's Lie-Poisson structure:
/// rigid body [|m|^2], heavy top [m.a, |a|^2]. Fluid Casimirs are out of scope.
std::vector<double> casimir_values(const DualElement& y);

/// Gradients of the Casimirs, paired against flow directions in tests.
std::vector<std::pair<Vec3, Vec3>> casimir_gradients(const DualElement& y);

/// Transport part of the coadjoint flow along w: (m x w, a x w). This is the
/// generator the Lie-Poisson steppers use per noise channel; every Casimir is
/// invariant along these directions.
DualElement coadjoint_transport(const Vec3& w, const DualElement& y);

void require_same_realization(Realization a, Realization b);

}  // namespace sgm
