#include "sgm/algebra.hpp"

#include <cmath>

namespace sgm {

const char* to_string(Realization r) {
  switch (r) {
    case Realization::rigid_body: return "rigid_body";
    case Realization::heavy_top:  return "heavy_top";
    case Realization::euler2d:    return "euler2d";
  }
  return "unknown";
}

void require_same_realization(Realization a, Realization b) {
  if (a != b)
    throw Error(ErrorCode::realization_mismatch,
                std::string(to_string(a)) + " vs " + to_string(b));
}

namespace {

void require_finite(const Vec3& v, const char* what) {
  if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
    throw Error(ErrorCode::invalid_argument, std::string(what) + " has non-finite entries");
}

Field shifted(const Field& f, double sx, double sy) {
  Spectral sp(f.grid());
  Field out(f.grid(), f.kind());
  for (int c = 0; c < f.comps(); ++c) set_plane(out, c, sp.shift(plane_of(f, c), sx, sy));
  return out;
}

}  // namespace

// --- element constructors ----------------------------------------------------

AlgebraElement AlgebraElement::rigid(const Vec3& u) {
  require_finite(u, "algebra u");
  AlgebraElement e;
  e.realization_ = Realization::rigid_body;
  e.u_ = u;
  return e;
}

AlgebraElement AlgebraElement::heavy(const Vec3& u, const Vec3& b) {
  require_finite(u, "algebra u");
  require_finite(b, "algebra b");
  AlgebraElement e;
  e.realization_ = Realization::heavy_top;
  e.u_ = u;
  e.b_ = b;
  return e;
}

AlgebraElement AlgebraElement::euler(VectorField u, Field b) {
  require_same_grid(u, b);
  require_kind(u, FieldKind::vector, "fluid algebra u must be a vector field");
  require_kind(b, FieldKind::scalar, "fluid algebra b must be scalar");
  AlgebraElement e;
  e.realization_ = Realization::euler2d;
  e.grid_ = std::make_shared<GridAlgebra>(GridAlgebra{std::move(u), std::move(b)});
  return e;
}

AlgebraElement AlgebraElement::zero(Realization r) {
  if (r == Realization::euler2d)
    throw Error(ErrorCode::invalid_argument, "fluid zero element needs a grid");
  AlgebraElement e;
  e.realization_ = r;
  return e;
}

const GridAlgebra& AlgebraElement::grid() const {
  if (!grid_) throw Error(ErrorCode::unsupported_realization, "not a fluid algebra element");
  return *grid_;
}

DualElement DualElement::rigid(const Vec3& m) {
  require_finite(m, "dual m");
  DualElement e;
  e.realization_ = Realization::rigid_body;
  e.m_ = m;
  return e;
}

DualElement DualElement::heavy(const Vec3& m, const Vec3& a) {
  require_finite(m, "dual m");
  require_finite(a, "dual a");
  DualElement e;
  e.realization_ = Realization::heavy_top;
  e.m_ = m;
  e.a_ = a;
  return e;
}

DualElement DualElement::euler(Field m, Field a) {
  require_same_grid(m, a);
  require_kind(m, FieldKind::one_form, "fluid dual m must be a one-form");
  if (a.comps() != 1) throw Error(ErrorCode::unsupported_kind, "fluid dual a must be scalar-valued");
  DualElement e;
  e.realization_ = Realization::euler2d;
  e.grid_ = std::make_shared<GridDual>(GridDual{std::move(m), std::move(a)});
  return e;
}

DualElement DualElement::zero(Realization r) {
  if (r == Realization::euler2d)
    throw Error(ErrorCode::invalid_argument, "fluid zero element needs a grid");
  DualElement e;
  e.realization_ = r;
  return e;
}

const GridDual& DualElement::grid() const {
  if (!grid_) throw Error(ErrorCode::unsupported_realization, "not a fluid dual element");
  return *grid_;
}

GroupElement GroupElement::rigid(const Mat3& R) {
  if (!is_special_orthogonal(R))
    throw Error(ErrorCode::invalid_group_element, "rotation slot is not in SO(3) to 1e-12");
  GroupElement g;
  g.realization_ = Realization::rigid_body;
  g.R_ = R;
  return g;
}

GroupElement GroupElement::heavy(const Mat3& R, const Vec3& v) {
  if (!is_special_orthogonal(R))
    throw Error(ErrorCode::invalid_group_element, "rotation slot is not in SO(3) to 1e-12");
  require_finite(v, "group v");
  GroupElement g;
  g.realization_ = Realization::heavy_top;
  g.R_ = R;
  g.v_ = v;
  return g;
}

GroupElement GroupElement::euler_translation(const Grid2D& grid, double sx, double sy, Field v) {
  require_kind(v, FieldKind::scalar, "group V-part must be scalar");
  if (v.grid() != grid) throw Error(ErrorCode::grid_mismatch, "group V-part on wrong grid");
  GroupElement g;
  g.realization_ = Realization::euler2d;
  g.sx_ = sx;
  g.sy_ = sy;
  g.grid_ = grid;
  g.v_field_ = std::make_shared<Field>(std::move(v));
  return g;
}

GroupElement GroupElement::identity(Realization r) {
  if (r == Realization::euler2d)
    throw Error(ErrorCode::invalid_argument, "fluid identity needs a grid");
  GroupElement g;
  g.realization_ = r;
  return g;
}

const Field& GroupElement::v_field() const {
  if (!v_field_) throw Error(ErrorCode::unsupported_realization, "not a fluid group element");
  return *v_field_;
}

const Grid2D& GroupElement::grid() const { return grid_; }

// --- pairing -----------------------------------------------------------------

double pair(const DualElement& x, const AlgebraElement& y) {
  require_same_realization(x.realization(), y.realization());
  switch (x.realization()) {
    case Realization::rigid_body:
      return dot(x.m(), y.u());
    case Realization::heavy_top:
      return dot(x.m(), y.u()) + dot(x.a(), y.b());
    case Realization::euler2d: {
      const GridDual& d = x.grid();
      const GridAlgebra& a = y.grid();
      require_same_grid(d.m, a.u);
      return quadrature_pair(d.m.as_kind(FieldKind::vector), a.u) + quadrature_pair(d.a, a.b);
    }
  }
  throw Error(ErrorCode::unsupported_realization, "pair");
}

// --- group operations ----------------------------------------------------------

GroupElement group_mul(const GroupElement& p, const GroupElement& q) {
  require_same_realization(p.realization(), q.realization());
  switch (p.realization()) {
    case Realization::rigid_body:
      return GroupElement::rigid(p.rotation() * q.rotation());
    case Realization::heavy_top:
      // (g1,v1)(g2,v2) = (g1 g2, v2 + g2 . v1). Associativity requires the
      // V-slot map to be a right action, realized here as the transpose
      // (pull-back) action R^T v.
      return GroupElement::heavy(p.rotation() * q.rotation(),
                                 q.v() + q.rotation().transpose() * p.v());
    case Realization::euler2d: {
      if (p.grid() != q.grid()) throw Error(ErrorCode::grid_mismatch, "group elements on different grids");
      // Pull-back of a scalar by the translation x -> x + s2.
      Field v = axpy(1.0, shifted(p.v_field(), -q.shift_x(), -q.shift_y()), q.v_field());
      return GroupElement::euler_translation(p.grid(), p.shift_x() + q.shift_x(),
                                             p.shift_y() + q.shift_y(), std::move(v));
    }
  }
  throw Error(ErrorCode::unsupported_realization, "group_mul");
}

GroupElement group_inv(const GroupElement& p) {
  switch (p.realization()) {
    case Realization::rigid_body:
      return GroupElement::rigid(p.rotation().transpose());
    case Realization::heavy_top:
      return GroupElement::heavy(p.rotation().transpose(), -(p.rotation() * p.v()));
    case Realization::euler2d: {
      Field v = shifted(p.v_field(), p.shift_x(), p.shift_y());
      for (double& val : v.data()) val = -val;
      return GroupElement::euler_translation(p.grid(), -p.shift_x(), -p.shift_y(), std::move(v));
    }
  }
  throw Error(ErrorCode::unsupported_realization, "group_inv");
}

GroupElement AD(const GroupElement& p, const GroupElement& q) {
  return group_mul(group_mul(p, q), group_inv(p));
}

// --- adjoint / coadjoint actions of the group ---------------------------------

AlgebraElement Ad(const GroupElement& p, const AlgebraElement& y) {
  require_same_realization(p.realization(), y.realization());
  switch (p.realization()) {
    case Realization::rigid_body:
      return AlgebraElement::rigid(p.rotation() * y.u());
    case Realization::heavy_top: {
      // Conjugation derivative: (R u, R (b - L_u v)) with L_u v = u x v.
      Vec3 gu = p.rotation() * y.u();
      Vec3 rest = p.rotation() * (y.b() - cross(y.u(), p.v()));
      return AlgebraElement::heavy(gu, rest);
    }
    case Realization::euler2d: {
      const GridAlgebra& ya = y.grid();
      if (ya.u.grid() != p.grid()) throw Error(ErrorCode::grid_mismatch, "Ad grid mismatch");
      VectorField gu = shifted(ya.u, p.shift_x(), p.shift_y());
      gu.divergence_free = ya.u.divergence_free;
      Field lv = lie_derivative(ya.u, p.v_field());
      Field rest = shifted(axpy(-1.0, lv, ya.b), p.shift_x(), p.shift_y());
      return AlgebraElement::euler(std::move(gu), std::move(rest));
    }
  }
  throw Error(ErrorCode::unsupported_realization, "Ad");
}

DualElement Ad_star(const GroupElement& p, const DualElement& x) {
  require_same_realization(p.realization(), x.realization());
  // Exact dual under the pairing: Ad_star(q, .) = (Ad of q^-1) transposed, so
  // that <Ad_star(p^-1, x), y> = <x, Ad(p, y)> holds identically.
  switch (p.realization()) {
    case Realization::rigid_body: {
      return DualElement::rigid(p.rotation() * x.m());
    }
    case Realization::heavy_top: {
      const Mat3& S = p.rotation();
      Vec3 a_out = S * x.a();
      Vec3 m_out = S * x.m() + cross(S * p.v(), a_out);
      return DualElement::heavy(m_out, a_out);
    }
    case Realization::euler2d: {
      const GridDual& d = x.grid();
      if (d.m.grid() != p.grid()) throw Error(ErrorCode::grid_mismatch, "Ad_star grid mismatch");
      // Translation analog of (S m + (S w) x (S a), S a) with the grid diamond.
      Field a_out = shifted(d.a, p.shift_x(), p.shift_y());
      Field w = shifted(p.v_field(), p.shift_x(), p.shift_y());
      Field m_out = axpy(-1.0, diamond(w, a_out), shifted(d.m, p.shift_x(), p.shift_y()));
      return DualElement::euler(std::move(m_out), std::move(a_out));
    }
  }
  throw Error(ErrorCode::unsupported_realization, "Ad_star");
}

// --- adjoint / coadjoint actions of the algebra --------------------------------

AlgebraElement ad(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_realization(x.realization(), y.realization());
  switch (x.realization()) {
    case Realization::rigid_body:
      return AlgebraElement::rigid(-cross(x.u(), y.u()));
    case Realization::heavy_top:
      return AlgebraElement::heavy(-cross(x.u(), y.u()),
                                   cross(x.u(), y.b()) - cross(y.u(), x.b()));
    case Realization::euler2d: {
      const GridAlgebra& xa = x.grid();
      const GridAlgebra& ya = y.grid();
      require_same_grid(xa.u, ya.u);
      Field commutator = lie_derivative(xa.u, ya.u);  // [u, u~]
      for (double& v : commutator.data()) v = -v;
      Field vpart = axpy(-1.0, lie_derivative(ya.u, xa.b), lie_derivative(xa.u, ya.b));
      return AlgebraElement::euler(std::move(commutator), std::move(vpart));
    }
  }
  throw Error(ErrorCode::unsupported_realization, "ad");
}

DualElement ad_star(const AlgebraElement& x, const DualElement& y) {
  require_same_realization(x.realization(), y.realization());
  switch (x.realization()) {
    case Realization::rigid_body:
      return DualElement::rigid(cross(x.u(), y.m()));
    case Realization::heavy_top: {
      Vec3 m_out = cross(x.u(), y.m()) + diamond(Realization::heavy_top, x.b(), y.a());
      Vec3 a_out = -cross(x.u(), y.a());
      return DualElement::heavy(m_out, a_out);
    }
    case Realization::euler2d: {
      const GridAlgebra& xa = x.grid();
      const GridDual& yd = y.grid();
      require_same_grid(xa.u, yd.m);
      // One-form density transport: L_u m + m div u; the div term keeps the
      // duality exact for transport fields that are not divergence-free.
      Field lm = lie_derivative(xa.u, yd.m);
      Field divu = divergence(xa.u);
      for (std::size_t n = 0; n < xa.u.grid().nodes(); ++n) {
        lm.data()[2 * n] += yd.m.data()[2 * n] * divu.data()[n];
        lm.data()[2 * n + 1] += yd.m.data()[2 * n + 1] * divu.data()[n];
      }
      Field m_out = axpy(1.0, diamond(xa.b, yd.a), lm);
      // V* carries the density weight, so the advected slot moves by -div(a u).
      Field au(xa.u.grid(), FieldKind::vector);
      for (std::size_t n = 0; n < xa.u.grid().nodes(); ++n) {
        au.data()[2 * n] = yd.a.data()[n] * xa.u.data()[2 * n];
        au.data()[2 * n + 1] = yd.a.data()[n] * xa.u.data()[2 * n + 1];
      }
      Field a_out = divergence(au);
      for (double& v : a_out.data()) v = -v;
      return DualElement::euler(std::move(m_out), std::move(a_out.as_kind(yd.a.kind())));
    }
  }
  throw Error(ErrorCode::unsupported_realization, "ad_star");
}

Vec3 diamond(Realization r, const Vec3& v, const Vec3& a) {
  if (r == Realization::rigid_body) return {0, 0, 0};  // trivial vector space
  if (r != Realization::heavy_top)
    throw Error(ErrorCode::unsupported_realization, "finite-dim diamond");
  return cross(a, v);
}

Field diamond(const Field& v, const Field& a) {
  require_same_grid(v, a);
  require_kind(v, FieldKind::scalar, "diamond V-part must be scalar");
  if (a.comps() != 1) throw Error(ErrorCode::unsupported_kind, "diamond V*-part must be scalar-valued");
  VectorField gv = gradient(v);
  Field out(v.grid(), FieldKind::one_form);
  for (std::size_t n = 0; n < v.grid().nodes(); ++n) {
    out.data()[2 * n] = -a.data()[n] * gv.data()[2 * n];
    out.data()[2 * n + 1] = -a.data()[n] * gv.data()[2 * n + 1];
  }
  return out;
}

std::vector<double> casimir_values(const DualElement& y) {
  switch (y.realization()) {
    case Realization::rigid_body:
      return {dot(y.m(), y.m())};
    case Realization::heavy_top:
      return {dot(y.m(), y.a()), dot(y.a(), y.a())};
    case Realization::euler2d:
      throw Error(ErrorCode::unsupported_realization,
                  "fluid Casimirs (enstrophy family) are out of scope");
  }
  throw Error(ErrorCode::unsupported_realization, "casimir_values");
}

std::vector<std::pair<Vec3, Vec3>> casimir_gradients(const DualElement& y) {
  switch (y.realization()) {
    case Realization::rigid_body:
      return {{y.m() * 2.0, Vec3{}}};
    case Realization::heavy_top:
      return {{y.a(), y.m()}, {Vec3{}, y.a() * 2.0}};
    default:
      throw Error(ErrorCode::unsupported_realization, "casimir_gradients");
  }
}

DualElement coadjoint_transport(const Vec3& w, const DualElement& y) {
  switch (y.realization()) {
    case Realization::rigid_body:
      return DualElement::rigid(cross(y.m(), w));
    case Realization::heavy_top:
      return DualElement::heavy(cross(y.m(), w), cross(y.a(), w));
    default:
      throw Error(ErrorCode::unsupported_realization, "coadjoint_transport");
  }
}

}  // namespace sgm
