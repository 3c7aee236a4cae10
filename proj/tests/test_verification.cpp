#include <doctest.h>

#include <cmath>

#include "sgm/checks.hpp"

using namespace sgm;

namespace {

const Grid2D kGrid32(32, 32, 2 * M_PI, 2 * M_PI);
const Grid2D kGrid64(64, 64, 2 * M_PI, 2 * M_PI);

}  // namespace

// ============================================================================
// Order fitting
// ============================================================================

TEST_CASE("fit_order: recovers a clean power law") {
  std::vector<double> h{0.1, 0.05, 0.025};
  std::vector<double> r{1e-2, 2.5e-3, 6.25e-4};
  double r2;
  double slope = fit_order(h, r, &r2);
  CHECK(slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_order({0.1}, {1.0}, nullptr), Error);
}

TEST_CASE("residual report: R^2 below 0.9 flags inconclusive") {
  ResidualReport rep;
  rep.resolutions = {0.1, 0.05, 0.025};
  rep.residuals = {1e-3, 9e-4, 9.5e-4};  // jittering plateau
  rep.fit_and_judge(1.0);
  CHECK(rep.inconclusive);
  CHECK_FALSE(rep.pass);
}

// ============================================================================
// Deterministic Lie chain rule
// ============================================================================

TEST_CASE("chain rule: eps-independent family gives zero residual") {
  ChainRuleFamily fam;
  fam.S0.modes = {{1, 0, 0.7, 0.0}, {1, 1, 0.0, 0.4}};
  fam.S1.modes = {};  // dS/deps = 0
  fam.w.psi.modes = {};  // identity flow
  fam.eps0 = 0.3;
  auto rep = check_lie_chain_rule(fam, kGrid32, {0.1, 0.05});
  CHECK(rep.max_residual < 1e-13);
}

TEST_CASE("chain rule: linear family under the identity flow is exact") {
  // S_eps = (1 + eps) f with w = 0: the derivative is f itself, the central
  // difference of a linear family has no truncation error
  ChainRuleFamily fam;
  fam.S0.modes = {{1, 0, 0.7, 0.0}};
  fam.S1.modes = {{1, 0, 0.7, 0.0}};
  fam.w.psi.modes = {};
  fam.eps0 = 0.25;
  auto rep = check_lie_chain_rule(fam, kGrid32, {0.1, 0.05});
  CHECK(rep.max_residual < 1e-12);
}

TEST_CASE("chain rule: cellular rotation family fits order 2") {
  ChainRuleFamily fam;
  fam.S0.modes = {{1, 0, 0.8, 0.0}, {0, 1, 0.0, 0.6}, {1, 1, 0.3, -0.2}};
  fam.S1.modes = {{2, 1, 0.0, 0.5}, {1, 2, 0.4, 0.0}};
  fam.w.psi.modes = {{1, 1, 0.7, 0.0}, {2, 0, 0.0, 0.3}};
  fam.eps0 = 0.3;
  auto rep = check_lie_chain_rule(fam, kGrid64, {0.1, 0.05, 0.025});
  CHECK(rep.pass);
  CHECK(rep.fitted_order == doctest::Approx(2.0).epsilon(0.1));
  CHECK(rep.r_squared >= 0.9);
}

TEST_CASE("chain rule: roundoff-dominated steps are flagged, not passed") {
  ChainRuleFamily fam;
  fam.S0.modes = {{1, 0, 0.8, 0.0}};
  fam.S1.modes = {{1, 1, 0.0, 0.5}};
  fam.w.psi.modes = {{1, 1, 0.7, 0.0}};
  fam.eps0 = 0.3;
  auto rep = check_lie_chain_rule(fam, kGrid32, {1e-7, 5e-8, 2.5e-8});
  CHECK_FALSE(rep.pass);
}

// ============================================================================
// Kunita-Ito-Wentzell formula
// ============================================================================

namespace {

KiwSpec small_kiw(int flow_channels, int k_channels, FieldKind kind) {
  KiwSpec spec;
  spec.kind = kind;
  spec.K0.a0.modes = {{1, 0, 0.9, 0.0}, {1, 1, 0.0, 0.4}};
  spec.K0.a1.modes = {{0, 1, 0.5, 0.0}, {2, 1, 0.0, 0.2}};
  spec.G.a0.modes = {{0, 1, 0.0, 0.3}};
  spec.G.a1.modes = {{1, 0, 0.2, 0.0}};
  for (int c = 0; c < k_channels; ++c) {
    FourierOneForm h;
    h.a0.modes = {{1 + c, 1, 0.25 / (1 + c), 0.0}};
    h.a1.modes = {{1, 1 + c, 0.0, 0.2 / (1 + c)}};
    spec.H.push_back(h);
  }
  spec.u.psi.modes = {{1, 1, 0.4, 0.0}, {0, 2, 0.0, 0.25}};
  for (int c = 0; c < flow_channels; ++c) {
    StreamVelocity xi;
    xi.psi.modes = {{2, 1 + c, 0.12 / (1 + c), 0.0}};
    spec.xi.push_back(xi);
  }
  spec.T = 0.5;
  return spec;
}

}  // namespace

TEST_CASE("kiw: deterministic degenerate case reduces to the chain rule, order >= 1") {
  auto spec = small_kiw(0, 0, FieldKind::scalar);
  auto rep = check_kiw(spec, kGrid32, {4e-3, 2e-3, 1e-3}, 10, 1.0);
  CHECK(rep.pass);
  CHECK(rep.fitted_order >= 1.0);
}

TEST_CASE("kiw: single-channel scalar case has strong order >= 0.9") {
  auto spec = small_kiw(1, 1, FieldKind::scalar);
  spec.u.psi.modes.clear();  // u = 0, G = 0: pure noise case from the contract
  spec.G.a0.modes.clear();
  spec.G.a1.modes.clear();
  auto rep = check_kiw(spec, kGrid32, {4e-3, 2e-3, 1e-3}, 11, 0.9);
  CHECK(rep.pass);
}

TEST_CASE("kiw: two channels on a scalar, monotone residuals, order >= 0.5") {
  auto spec = small_kiw(2, 2, FieldKind::scalar);
  auto rep = check_kiw(spec, kGrid32, {4e-3, 2e-3, 1e-3}, 12, 0.5);
  CHECK(rep.pass);
  CHECK(rep.residuals[0] > rep.residuals[1]);
  CHECK(rep.residuals[1] > rep.residuals[2]);
}

TEST_CASE("kiw: one-form kind works through the flow-map Jacobian") {
  auto spec = small_kiw(1, 1, FieldKind::one_form);
  auto rep = check_kiw(spec, kGrid32, {4e-3, 2e-3, 1e-3}, 13, 0.5);
  CHECK(rep.pass);
}

TEST_CASE("kiw: unsupported kinds and broken ladders are rejected") {
  auto spec = small_kiw(1, 1, FieldKind::density);
  CHECK_THROWS_AS(check_kiw(spec, kGrid32, {4e-3, 2e-3}, 1, 0.5), Error);
  auto ok = small_kiw(1, 1, FieldKind::scalar);
  CHECK_THROWS_AS(check_kiw(ok, kGrid32, {4e-3, 3e-3}, 1, 0.5), Error);
}

// ============================================================================
// Variational lemma
// ============================================================================

TEST_CASE("variation lemma: v = 0 gives zero on both sides") {
  VariationSpec spec;
  spec.c0 = spec.c1 = spec.c2 = {0, 0, 0};
  auto rep = check_variation_lemma(spec, 1e-3, {1e-2, 5e-3}, {}, 21);
  CHECK(rep.max_residual < 1e-13);
}

TEST_CASE("variation lemma: commuting constant family reduces to dv exactly") {
  // collinear u, xi and constant v: the bracket vanishes and dv = 0
  VariationSpec spec;
  spec.u = {0, 0, 0.8};
  spec.xi = {{0, 0, 0.2}};
  spec.c0 = {0, 0, 1.3};
  spec.c1 = {0, 0, 0};
  spec.c2 = {0, 0, 0};
  auto rep = check_variation_lemma(spec, 1e-3, {1e-2, 5e-3}, {}, 22);
  CHECK(rep.max_residual < 1e-12);
}

TEST_CASE("variation lemma: generic so(3) family has residual order 2 in eps") {
  VariationSpec spec;  // defaults: generic curve, small single-channel noise
  auto rep = check_variation_lemma(spec, 1e-4, {1e-2, 5e-3, 2.5e-3}, {4e-4, 2e-4, 1e-4}, 23);
  CHECK(rep.pass);
  CHECK(rep.fitted_order >= 1.8);
  CHECK(rep.params["dt_decreasing"].get<bool>());
}

// ============================================================================
// Duality suites
// ============================================================================

TEST_CASE("dualities: 1000 finite-dim tuples stay under 1e-10") {
  auto rigid = check_dualities(Realization::rigid_body, 1000, 31);
  CHECK(rigid.pass);
  CHECK(rigid.max_residual < 1e-10);
  auto heavy = check_dualities(Realization::heavy_top, 1000, 32);
  CHECK(heavy.pass);
  CHECK(heavy.max_residual < 1e-10);
}

TEST_CASE("dualities: 50 band-limited grid tuples stay under 1e-6 relative") {
  auto rep = check_dualities_grid(kGrid32, 50, 33);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-6);
}

TEST_CASE("dualities: threshold exceedance is a failing report, not an exception") {
  DualityThresholds absurd;
  absurd.finite_dim = 1e-18;
  auto rep = check_dualities(Realization::heavy_top, 100, 34, absurd);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.inconclusive);
}

TEST_CASE("dualities: reports are bit-reproducible for a fixed seed") {
  auto a = check_dualities(Realization::heavy_top, 200, 35);
  auto b = check_dualities(Realization::heavy_top, 200, 35);
  CHECK(a.to_json().dump() == b.to_json().dump());
}

// ============================================================================
// Casimir / energy report
// ============================================================================

TEST_CASE("casimir report: deterministic rigid body conserves both quantities") {
  auto L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
  NoiseModel off;
  off.realization = Realization::rigid_body;
  NoisePath path = sample_brownian(1, 1e-3, 5000, 0);
  auto states = lie_poisson_trajectory(DualElement::rigid({0.6, 0.4, 1.2}), L, off, path);
  auto rep = casimir_energy_report(states, L, 0, 1e-3, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-10);
  CHECK(rep.params["energy_excursion"].get<double>() < 1e-10);
}

TEST_CASE("casimir report: stochastic runs keep Casimirs but not energy") {
  auto L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
  NoiseModel noise;
  noise.realization = Realization::rigid_body;
  noise.xis = {{0.0, 0.0, 1.0}};
  NoisePath path = sample_brownian(40, 1e-3, 10000, 1);
  auto states = lie_poisson_trajectory(DualElement::rigid({0.6, 0.4, 1.2}), L, noise, path);
  auto rep = casimir_energy_report(states, L, 1, 1e-3);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-8);
  CHECK(rep.params["energy_excursion"].get<double>() > 1e-4);
  CHECK(rep.params["energy_exceeds_100x_drift"].get<bool>());

  auto Lh = LagrangianModel::heavy_top({1.0, 1.4, 2.2}, 1.0, {0, 0, 1});
  NoiseModel nh;
  nh.realization = Realization::heavy_top;
  nh.xis = {{0.0, 0.0, 0.3}};
  NoisePath ph = sample_brownian(41, 1e-3, 10000, 1);
  auto sh = lie_poisson_trajectory(DualElement::heavy({0.5, -0.3, 0.8}, {0.1, 0.2, 0.97}),
                                   Lh, nh, ph);
  auto rh = casimir_energy_report(sh, Lh, 1, 1e-3);
  CHECK(rh.pass);
}

TEST_CASE("casimir report: missing states are rejected") {
  auto L = LagrangianModel::rigid_body({1, 2, 3});
  CHECK_THROWS_AS(casimir_energy_report({}, L, 0, 1e-3), Error);
}
