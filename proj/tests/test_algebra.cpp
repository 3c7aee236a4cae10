#include <doctest.h>

#include "sgm/algebra.hpp"
#include "sgm/noise.hpp"

using namespace sgm;

namespace {

Vec3 rand_vec(GaussianRng& rng) { return {rng.normal(), rng.normal(), rng.normal()}; }

constexpr double kTight = 1e-12;
constexpr double kDual = 1e-10;

}  // namespace

// ============================================================================
// Pairing
// ============================================================================

TEST_CASE("pairing: zero element pairs to zero") {
  auto zero = DualElement::zero(Realization::heavy_top);
  auto y = AlgebraElement::heavy({1, 2, 3}, {4, 5, 6});
  CHECK(pair(zero, y) == 0.0);
}

TEST_CASE("pairing: rigid body dot product") {
  auto x = DualElement::rigid({1, 2, 3});
  auto y = AlgebraElement::rigid({4, 5, 6});
  CHECK(pair(x, y) == doctest::Approx(32.0).epsilon(1e-15));
}

TEST_CASE("pairing: heavy top sum of dots") {
  auto x = DualElement::heavy({1, 0, 0}, {0, 1, 0});
  auto y = AlgebraElement::heavy({1, 0, 0}, {0, 2, 0});
  CHECK(pair(x, y) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("pairing: realization mismatch is a typed error") {
  auto x = DualElement::rigid({1, 0, 0});
  auto y = AlgebraElement::heavy({1, 0, 0}, {0, 0, 0});
  CHECK_THROWS_WITH_AS(pair(x, y), doctest::Contains("realization_mismatch"), Error);
}

// ============================================================================
// Group operations
// ============================================================================

TEST_CASE("group: identity and inverse laws") {
  GaussianRng rng(31);
  for (int s = 0; s < 50; ++s) {
    auto p = GroupElement::heavy(so3_exp(rand_vec(rng)), rand_vec(rng));
    auto id = GroupElement::identity(Realization::heavy_top);

    auto pe = group_mul(p, id);
    CHECK(norm(pe.v() - p.v()) < kTight);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(pe.rotation().m[i][j] - p.rotation().m[i][j]) < kTight);

    auto prod = group_mul(p, group_inv(p));
    CHECK(norm(prod.v()) < kTight);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(prod.rotation().m[i][j] - (i == j ? 1.0 : 0.0)) < kTight);
  }
}

TEST_CASE("group: associativity on random samples") {
  GaussianRng rng(32);
  for (int s = 0; s < 50; ++s) {
    auto p = GroupElement::heavy(so3_exp(rand_vec(rng)), rand_vec(rng));
    auto q = GroupElement::heavy(so3_exp(rand_vec(rng)), rand_vec(rng));
    auto r = GroupElement::heavy(so3_exp(rand_vec(rng)), rand_vec(rng));
    auto lhs = group_mul(group_mul(p, q), r);
    auto rhs = group_mul(p, group_mul(q, r));
    CHECK(norm(lhs.v() - rhs.v()) < kTight);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(lhs.rotation().m[i][j] - rhs.rotation().m[i][j]) < kTight);
  }
}

TEST_CASE("group: V-slot carries the right (transpose) action of the second factor") {
  // Rotating the vector slot: associativity forces the right action, so the
  // second factor acts by R^T. The push-forward matrix-vector oracle
  // Rz(pi/2) e1 = e2 itself lives in the adjoint action (see the Ad case).
  auto p = GroupElement::heavy(Mat3::identity(), {1, 0, 0});
  auto q = GroupElement::heavy(rotation_z(M_PI / 2), {0, 0, 0});
  auto prod = group_mul(p, q);
  Vec3 expected = rotation_z(M_PI / 2).transpose() * Vec3{1, 0, 0};
  CHECK(norm(prod.v() - expected) < kTight);
  CHECK(prod.v().y == doctest::Approx(-1.0).epsilon(kTight));

  // matrix-vector oracle for the underlying rotation action
  Vec3 pushed = rotation_z(M_PI / 2) * Vec3{1, 0, 0};
  CHECK(pushed.y == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("group: non-orthogonal matrix is rejected") {
  Mat3 bad = Mat3::identity();
  bad.m[0][0] = 1.5;
  CHECK_THROWS_AS(GroupElement::rigid(bad), Error);
}

// ============================================================================
// AD / Ad / Ad*
// ============================================================================

TEST_CASE("AD: identity cases and three-factor oracle") {
  GaussianRng rng(33);
  auto id = GroupElement::identity(Realization::rigid_body);
  auto q = GroupElement::rigid(so3_exp(rand_vec(rng)));
  auto adq = AD(id, q);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(adq.rotation().m[i][j] - q.rotation().m[i][j]) < kTight);

  auto p = GroupElement::rigid(so3_exp(rand_vec(rng)));
  auto fixed = AD(p, id);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(fixed.rotation().m[i][j] - (i == j ? 1.0 : 0.0)) < kTight);

  // conjugation equals the explicit three-factor product
  for (int s = 0; s < 20; ++s) {
    auto a = GroupElement::rigid(so3_exp(rand_vec(rng)));
    auto b = GroupElement::rigid(so3_exp(rand_vec(rng)));
    auto lhs = AD(a, b);
    auto rhs = group_mul(group_mul(a, b), group_inv(a));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(lhs.rotation().m[i][j] - rhs.rotation().m[i][j]) < kTight);
  }
}

TEST_CASE("Ad: identity acts trivially, rotations conjugate the axis") {
  auto y = AlgebraElement::heavy({0.3, -1.2, 0.7}, {0.1, 0.4, -0.9});
  auto id = GroupElement::heavy(Mat3::identity(), {0, 0, 0});
  auto ay = Ad(id, y);
  CHECK(norm(ay.u() - y.u()) < kTight);
  CHECK(norm(ay.b() - y.b()) < kTight);

  auto rz = GroupElement::rigid(rotation_z(M_PI / 2));
  auto e1 = AlgebraElement::rigid({1, 0, 0});
  auto rot = Ad(rz, e1);
  CHECK(rot.u().x == doctest::Approx(0.0).epsilon(kTight));
  CHECK(rot.u().y == doctest::Approx(1.0).epsilon(kTight));
}

TEST_CASE("Ad/Ad*: duality on 100 random heavy-top samples") {
  GaussianRng rng(34);
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    auto p = GroupElement::heavy(so3_exp(rand_vec(rng)), rand_vec(rng));
    auto x = DualElement::heavy(rand_vec(rng), rand_vec(rng));
    auto y = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    worst = std::max(worst, std::abs(pair(Ad_star(group_inv(p), x), y) - pair(x, Ad(p, y))));
  }
  CHECK(worst < kDual);
}

// ============================================================================
// ad / ad* / diamond
// ============================================================================

TEST_CASE("ad: antisymmetry and ad(x,x) = 0") {
  GaussianRng rng(35);
  for (int s = 0; s < 50; ++s) {
    auto x = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    auto y = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    auto xy = ad(x, y), yx = ad(y, x);
    CHECK(norm(xy.u() + yx.u()) < kTight);
    CHECK(norm(xy.b() + yx.b()) < kTight);
    auto xx = ad(x, x);
    CHECK(norm(xx.u()) < kTight);
    CHECK(norm(xx.b()) < kTight);
  }
}

TEST_CASE("ad: rigid body value against the matrix commutator oracle") {
  auto e1 = AlgebraElement::rigid({1, 0, 0});
  auto e2 = AlgebraElement::rigid({0, 1, 0});
  auto r = ad(e1, e2);
  // oracle: [hat(e1), hat(e2)] = hat(e1 x e2), ad carries the right-action minus
  Mat3 comm = hat({1, 0, 0}) * hat({0, 1, 0});
  Mat3 comm2 = hat({0, 1, 0}) * hat({1, 0, 0});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) comm.m[i][j] -= comm2.m[i][j];
  Vec3 expected = -vee(comm);
  CHECK(norm(r.u() - expected) < kTight);
  CHECK(r.u().z == doctest::Approx(-1.0).epsilon(kTight));  // -e3
}

TEST_CASE("ad: heavy top V-slot matches the infinitesimal rotation") {
  auto x = AlgebraElement::heavy({1, 0, 0}, {0, 0, 0});
  auto y = AlgebraElement::heavy({0, 0, 0}, {0, 1, 0});
  auto r = ad(x, y);
  CHECK(norm(r.u()) < kTight);
  CHECK(r.b().z == doctest::Approx(1.0).epsilon(kTight));  // e1 x e2 = e3
}

TEST_CASE("ad: Jacobi identity on the Lie-algebra part") {
  GaussianRng rng(36);
  for (int s = 0; s < 100; ++s) {
    auto x = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    auto y = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    auto z = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    Vec3 cyc = ad(x, ad(y, z)).u() + ad(y, ad(z, x)).u() + ad(z, ad(x, y)).u();
    CHECK(norm(cyc) < kTight);
  }
}

TEST_CASE("diamond: linearity at zero and the triple-product identity") {
  CHECK(norm(diamond(Realization::heavy_top, {0, 0, 0}, {1, 2, 3})) == 0.0);

  // <v<>a, u> = -<a, u x v> checked over the basis
  Vec3 v{1, 0, 0}, a{0, 1, 0};
  Vec3 d = diamond(Realization::heavy_top, v, a);
  CHECK(d.z == doctest::Approx(-1.0).epsilon(kTight));  // e2 x e1 = -e3
  GaussianRng rng(37);
  for (int s = 0; s < 50; ++s) {
    Vec3 vv = rand_vec(rng), aa = rand_vec(rng);
    Vec3 dd = diamond(Realization::heavy_top, vv, aa);
    for (int k = 0; k < 3; ++k) {
      Vec3 u{k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0};
      CHECK(std::abs(dot(dd, u) + dot(aa, cross(u, vv))) < kTight);
    }
  }
}

TEST_CASE("ad*: zero element, rigid value and duality oracle") {
  auto zero_x = AlgebraElement::zero(Realization::heavy_top);
  auto y = DualElement::heavy({1, 2, 3}, {4, 5, 6});
  auto r0 = ad_star(zero_x, y);
  CHECK(norm(r0.m()) == 0.0);
  CHECK(norm(r0.a()) == 0.0);

  // rigid body: duality against ad(e1, .) over the basis fixes the sign
  auto x = AlgebraElement::rigid({1, 0, 0});
  auto m = DualElement::rigid({0, 1, 0});
  auto r = ad_star(x, m);
  for (int k = 0; k < 3; ++k) {
    Vec3 ek{k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0};
    auto z = AlgebraElement::rigid(ek);
    CHECK(std::abs(dot(r.m(), ek) - pair(m, ad(x, z))) < kTight);
  }

  GaussianRng rng(38);
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    auto xx = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    auto yy = DualElement::heavy(rand_vec(rng), rand_vec(rng));
    auto zz = AlgebraElement::heavy(rand_vec(rng), rand_vec(rng));
    worst = std::max(worst, std::abs(pair(ad_star(xx, yy), zz) - pair(yy, ad(xx, zz))));
  }
  CHECK(worst < kDual);
}

// ============================================================================
// Casimirs
// ============================================================================

TEST_CASE("casimir values: rigid and heavy top") {
  auto rb = DualElement::rigid({3, 4, 0});
  auto c1 = casimir_values(rb);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0] == doctest::Approx(25.0).epsilon(1e-15));

  auto ht = DualElement::heavy({1, 0, 0}, {0, 1, 0});
  auto c2 = casimir_values(ht);
  REQUIRE(c2.size() == 2);
  CHECK(c2[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(c2[1] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(
      casimir_values(DualElement::euler(Field(Grid2D(8, 8, 1, 1), FieldKind::one_form),
                                        Field(Grid2D(8, 8, 1, 1), FieldKind::scalar))),
      Error);
}

TEST_CASE("casimir invariance along coadjoint transport directions") {
  GaussianRng rng(39);
  for (int s = 0; s < 100; ++s) {
    auto y = DualElement::heavy(rand_vec(rng), rand_vec(rng));
    Vec3 w = rand_vec(rng);
    auto dir = coadjoint_transport(w, y);
    for (const auto& [gm, ga] : casimir_gradients(y))
      CHECK(std::abs(dot(gm, dir.m()) + dot(ga, dir.a())) < kTight);
  }
  for (int s = 0; s < 100; ++s) {
    auto y = DualElement::rigid(rand_vec(rng));
    Vec3 w = rand_vec(rng);
    auto dir = coadjoint_transport(w, y);
    for (const auto& [gm, ga] : casimir_gradients(y))
      CHECK(std::abs(dot(gm, dir.m())) < kTight);
  }
}

// ============================================================================
// Grid (euler2d) realization
// ============================================================================

TEST_CASE("grid ad/ad*/diamond: duality on band-limited samples") {
  Grid2D grid(32, 32, 2 * M_PI, 2 * M_PI);
  double worst_ad = 0, worst_dia = 0;
  for (int s = 0; s < 5; ++s) {
    std::uint64_t k = 500 + 11 * s;
    auto u = random_divfree_velocity(grid, 3, k);
    auto ut = random_divfree_velocity(grid, 3, k + 1);
    auto b = random_band_limited_scalar(grid, 3, k + 2);
    auto bt = random_band_limited_scalar(grid, 3, k + 3);
    Field m(grid, FieldKind::one_form);
    set_plane(m, 0, plane_of(random_band_limited_scalar(grid, 3, k + 4), 0));
    set_plane(m, 1, plane_of(random_band_limited_scalar(grid, 3, k + 5), 0));
    auto a = random_band_limited_scalar(grid, 3, k + 6);

    auto x = AlgebraElement::euler(u, b);
    auto z = AlgebraElement::euler(ut, bt);
    auto y = DualElement::euler(m, a);
    double lhs = pair(ad_star(x, y), z);
    double rhs = pair(y, ad(x, z));
    worst_ad = std::max(worst_ad, std::abs(lhs - rhs) / (std::abs(rhs) + 1e-12));

    double dl = quadrature_pair(diamond(b, a).as_kind(FieldKind::vector), ut);
    double dr = -quadrature_pair(a, lie_derivative(ut, b));
    worst_dia = std::max(worst_dia, std::abs(dl - dr) / (std::abs(dr) + 1e-12));
  }
  CHECK(worst_ad < 1e-6);
  CHECK(worst_dia < 1e-8);
}

TEST_CASE("grid ad: antisymmetry to grid tolerance") {
  Grid2D grid(32, 32, 2 * M_PI, 2 * M_PI);
  auto x = AlgebraElement::euler(random_divfree_velocity(grid, 3, 71),
                                 random_band_limited_scalar(grid, 3, 72));
  auto y = AlgebraElement::euler(random_divfree_velocity(grid, 3, 73),
                                 random_band_limited_scalar(grid, 3, 74));
  auto xy = ad(x, y), yx = ad(y, x);
  double worst = 0;
  for (std::size_t n = 0; n < xy.grid().u.data().size(); ++n)
    worst = std::max(worst, std::abs(xy.grid().u.data()[n] + yx.grid().u.data()[n]));
  for (std::size_t n = 0; n < xy.grid().b.data().size(); ++n)
    worst = std::max(worst, std::abs(xy.grid().b.data()[n] + yx.grid().b.data()[n]));
  CHECK(worst < 1e-8);
}

TEST_CASE("grid Ad/Ad*: translation group elements satisfy the duality") {
  Grid2D grid(32, 32, 2 * M_PI, 2 * M_PI);
  GaussianRng rng(75);
  double worst = 0;
  for (int s = 0; s < 5; ++s) {
    std::uint64_t k = 900 + 13 * s;
    auto p = GroupElement::euler_translation(grid, rng.uniform() * grid.Lx,
                                             rng.uniform() * grid.Ly,
                                             random_band_limited_scalar(grid, 3, k));
    Field m(grid, FieldKind::one_form);
    set_plane(m, 0, plane_of(random_band_limited_scalar(grid, 3, k + 1), 0));
    set_plane(m, 1, plane_of(random_band_limited_scalar(grid, 3, k + 2), 0));
    auto x = DualElement::euler(m, random_band_limited_scalar(grid, 3, k + 3));
    auto y = AlgebraElement::euler(random_divfree_velocity(grid, 3, k + 4),
                                   random_band_limited_scalar(grid, 3, k + 5));
    double lhs = pair(Ad_star(group_inv(p), x), y);
    double rhs = pair(x, Ad(p, y));
    worst = std::max(worst, std::abs(lhs - rhs) / (std::abs(rhs) + 1e-12));
  }
  CHECK(worst < 1e-6);
}
