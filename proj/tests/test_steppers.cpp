#include <doctest.h>

#include <cmath>
#include <cstring>

#include "sgm/dynamics.hpp"
#include "sgm/flowmap.hpp"

using namespace sgm;

namespace {

const Grid2D kGrid(64, 64, 2 * M_PI, 2 * M_PI);

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t n = 0; n < a.data().size(); ++n)
    m = std::max(m, std::abs(a.data()[n] - b.data()[n]));
  return m;
}

NoiseModel no_noise(Realization r) {
  NoiseModel m;
  m.realization = r;
  return m;
}

}  // namespace

// ============================================================================
// Generic Stratonovich midpoint step
// ============================================================================

TEST_CASE("stratonovich_step: zero drift and diffusion leave the state unchanged") {
  SdeSystem sys;
  sys.drift = [](const std::vector<double>& y) { return std::vector<double>(y.size(), 0.0); };
  std::vector<double> y{1.0, -2.0, 3.0};
  auto y1 = stratonovich_step(y, sys, 0.1, {});
  CHECK(y1 == y);
}

TEST_CASE("stratonovich_step: linear SDE self-refinement order >= 0.9 (single channel)") {
  // dx = a x dt + b x o dW has the Stratonovich solution x0 exp(a t + b W_t)
  const double a = 0.7, b = 0.5, T = 1.0;
  SdeSystem sys;
  sys.drift = [&](const std::vector<double>& y) { return std::vector<double>{a * y[0]}; };
  sys.diffusion = {[&](const std::vector<double>& y) { return std::vector<double>{b * y[0]}; }};
  auto solve = [&](const NoisePath& path) {
    std::vector<double> y{1.0};
    for (int s = 0; s < path.n_steps; ++s) {
      double dW = path.increment(s, 0);
      y = stratonovich_step(y, sys, path.dt, std::span<const double>(&dW, 1));
    }
    return y[0];
  };

  std::vector<double> dts{8e-3, 4e-3, 2e-3, 1e-3};
  std::vector<double> errs(dts.size(), 0.0);
  const int n_seeds = 8;  // average the pathwise error over a few paths
  for (int sd = 0; sd < n_seeds; ++sd) {
    NoisePath path = sample_brownian(1000 + sd, dts[0], static_cast<int>(T / dts[0]), 1);
    std::vector<double> vals;
    for (std::size_t lvl = 0; lvl < dts.size(); ++lvl) {
      if (lvl > 0) path = path.refined();
      vals.push_back(solve(path));
    }
    double reference = solve(path.refined());
    double WT = 0;
    for (int s = 0; s < path.n_steps; ++s) WT += path.increment(s, 0);
    CHECK(std::abs(reference - std::exp(a * T + b * WT)) < 5e-4);  // exact-solution anchor
    for (std::size_t lvl = 0; lvl < dts.size(); ++lvl)
      errs[lvl] += std::abs(vals[lvl] - reference) / n_seeds;
  }
  double slope = std::log(errs.front() / errs.back()) / std::log(dts.front() / dts.back());
  CHECK(slope >= 0.9);
}

TEST_CASE("stratonovich_step: non-convergent fixed point raises with the residual") {
  SdeSystem sys;
  sys.drift = [](const std::vector<double>& y) {
    return std::vector<double>{1e9 * y[0] + 1.0};  // Lipschitz constant far beyond 2/dt
  };
  std::vector<double> y{1.0};
  CHECK_THROWS_WITH_AS(stratonovich_step(y, sys, 1.0, {}),
                       doctest::Contains("fixed_point_diverged"), Error);
}

// ============================================================================
// Lie-Poisson stepper
// ============================================================================

TEST_CASE("lie_poisson: momentum on a principal axis is an equilibrium") {
  auto L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
  DualElement y = DualElement::rigid({1.0, 0.0, 0.0});
  for (int s = 0; s < 100; ++s) y = lie_poisson_step_deterministic(y, L, 1e-3);
  CHECK(norm(y.m() - Vec3{1.0, 0.0, 0.0}) < 1e-12);
}

TEST_CASE("lie_poisson: deterministic rigid body conserves energy over 1e4 steps") {
  auto L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
  DualElement y = DualElement::rigid({0.6, 0.4, 1.2});
  double h0 = L.hamiltonian(y.m(), y.a());
  double c0 = casimir_values(y)[0];
  for (int s = 0; s < 10000; ++s) y = lie_poisson_step_deterministic(y, L, 1e-3);
  CHECK(std::abs(L.hamiltonian(y.m(), y.a()) - h0) < 1e-10);
  CHECK(std::abs(casimir_values(y)[0] - c0) < 1e-10);
}

TEST_CASE("lie_poisson: stochastic rigid body preserves |m|^2 to 1e-8 over T=10") {
  auto L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
  NoiseModel noise;
  noise.realization = Realization::rigid_body;
  noise.xis = {{0.0, 0.0, 1.0}};
  NoisePath path = sample_brownian(2718, 1e-3, 10000, 1);
  auto states = lie_poisson_trajectory(DualElement::rigid({0.6, 0.4, 1.2}), L, noise, path);
  double c0 = casimir_values(states.front())[0];
  double drift = 0;
  for (const auto& y : states) drift = std::max(drift, std::abs(casimir_values(y)[0] - c0));
  CHECK(drift < 1e-8);

  // the Hamiltonian is NOT conserved on the same run
  double h0 = L.hamiltonian(states.front().m(), states.front().a());
  double excursion = 0;
  for (const auto& y : states)
    excursion = std::max(excursion, std::abs(L.hamiltonian(y.m(), y.a()) - h0));
  CHECK(excursion > 100.0 * drift);
  CHECK(excursion > 1e-4);
}

TEST_CASE("lie_poisson: stochastic heavy top preserves m.a and |a|^2 to 1e-8") {
  auto L = LagrangianModel::heavy_top({1.0, 1.4, 2.2}, 1.0, {0, 0, 1});
  NoiseModel noise;
  noise.realization = Realization::heavy_top;
  noise.xis = {{0.0, 0.0, 0.3}};
  NoisePath path = sample_brownian(1618, 1e-3, 10000, 1);
  auto states = lie_poisson_trajectory(DualElement::heavy({0.5, -0.3, 0.8}, {0.1, 0.2, 0.97}),
                                       L, noise, path);
  auto c0 = casimir_values(states.front());
  double d0 = 0, d1 = 0;
  for (const auto& y : states) {
    auto c = casimir_values(y);
    d0 = std::max(d0, std::abs(c[0] - c0[0]));
    d1 = std::max(d1, std::abs(c[1] - c0[1]));
  }
  CHECK(d0 < 1e-8);
  CHECK(d1 < 1e-8);
}

TEST_CASE("lie_poisson: Casimir drift shrinks with fixed-point tolerance, not with dt") {
  auto L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
  NoiseModel noise;
  noise.realization = Realization::rigid_body;
  noise.xis = {{0.0, 0.0, 1.0}};
  auto drift_for = [&](double tol, const NoisePath& path) {
    MidpointOptions opt{tol, 200};
    auto states =
        lie_poisson_trajectory(DualElement::rigid({0.6, 0.4, 1.2}), L, noise, path, opt);
    double c0 = casimir_values(states.front())[0];
    double d = 0;
    for (const auto& y : states) d = std::max(d, std::abs(casimir_values(y)[0] - c0));
    return d;
  };
  NoisePath coarse = sample_brownian(55, 2e-3, 1000, 1);
  double loose = drift_for(1e-6, coarse);
  double tight = drift_for(1e-12, coarse);
  CHECK(tight < loose / 10.0);

  // halving dt with the same path does not buy the same improvement
  double coarse_drift = drift_for(1e-6, coarse);
  double fine_drift = drift_for(1e-6, coarse.refined());
  CHECK(fine_drift > tight);
  CHECK(coarse_drift / std::max(fine_drift, 1e-300) < 10.0);
}

TEST_CASE("lie_poisson: M = 0 matches the deterministic stepper bit for bit") {
  auto L = LagrangianModel::heavy_top({1.0, 1.4, 2.2}, 1.0, {0, 0, 1});
  DualElement a = DualElement::heavy({0.5, -0.3, 0.8}, {0.1, 0.2, 0.97});
  DualElement b = a;
  NoiseModel off = no_noise(Realization::heavy_top);
  for (int s = 0; s < 500; ++s) {
    a = lie_poisson_step(a, L, off, 1e-3, {});
    b = lie_poisson_step_deterministic(b, L, 1e-3);
  }
  CHECK(std::memcmp(&a.m(), &b.m(), sizeof(Vec3)) == 0);
  CHECK(std::memcmp(&a.a(), &b.a(), sizeof(Vec3)) == 0);
}

TEST_CASE("lie_poisson: realization and channel mismatches are typed errors") {
  auto L = LagrangianModel::rigid_body({1, 2, 3});
  NoiseModel noise = no_noise(Realization::rigid_body);
  auto y = DualElement::heavy({1, 0, 0}, {0, 0, 1});
  CHECK_THROWS_AS(lie_poisson_step(y, L, noise, 1e-3, {}), Error);
  CHECK_THROWS_AS(LagrangianModel::rigid_body({1.0, 0.0, 3.0}), Error);
}

// ============================================================================
// SALT Euler vorticity stepper
// ============================================================================

TEST_CASE("salt_euler: Taylor-Green is steady without noise") {
  Field w = taylor_green_vorticity(kGrid);
  Field w0 = w;
  NoiseModel off = no_noise(Realization::euler2d);
  for (int s = 0; s < 200; ++s) w = salt_euler_step(w, off, 1e-3, {});
  CHECK(max_abs_diff(w, w0) / max_abs(w0) < 1e-7);
}

TEST_CASE("salt_euler: zero vorticity stays zero under any noise") {
  Field w(kGrid, FieldKind::scalar);
  NoiseModel noise;
  noise.realization = Realization::euler2d;
  noise.xi_fields.push_back(random_divfree_velocity(kGrid, 2, 21));
  for (double& v : noise.xi_fields[0].data()) v *= 0.1;
  NoisePath path = sample_brownian(8, 1e-3, 50, 1);
  for (int s = 0; s < path.n_steps; ++s) {
    double dW = path.increment(s, 0);
    w = salt_euler_step(w, noise, path.dt, std::span<const double>(&dW, 1));
  }
  CHECK(max_abs(w) == 0.0);
}

TEST_CASE("salt_euler: uniform noise field transports the vorticity exactly") {
  // dchi = xi o dW with constant xi: the solution is omega shifted by xi W_t
  Field w0 = random_band_limited_scalar(kGrid, 4, 22);
  NoiseModel noise;
  noise.realization = Realization::euler2d;
  VectorField xi(kGrid, FieldKind::vector);
  const double cx = 0.06, cy = -0.04;
  for (std::size_t n = 0; n < kGrid.nodes(); ++n) {
    xi.data()[2 * n] = cx;
    xi.data()[2 * n + 1] = cy;
  }
  noise.xi_fields.push_back(xi);

  SaltOptions opt;
  opt.self_advection = false;  // isolate pure noise transport
  NoisePath path = sample_brownian(23, 1e-3, 1000, 1);
  Field w = w0;
  double WT = 0;
  for (int s = 0; s < path.n_steps; ++s) {
    double dW = path.increment(s, 0);
    WT += dW;
    w = salt_euler_step(w, noise, path.dt, std::span<const double>(&dW, 1), opt);
  }
  Spectral sp(kGrid);
  Field expected(kGrid, FieldKind::scalar);
  expected.data() = sp.shift(plane_of(w0, 0), cx * WT, cy * WT);
  double rel = max_abs_diff(w, expected) / max_abs(w0);
  CHECK(rel < 1e-4);
}

TEST_CASE("salt_euler: mean vorticity is preserved to 1e-12") {
  Field w = random_band_limited_scalar(kGrid, 5, 24);
  NoiseModel noise;
  noise.realization = Realization::euler2d;
  noise.xi_fields.push_back(random_divfree_velocity(kGrid, 2, 25));
  for (double& v : noise.xi_fields[0].data()) v *= 0.05;
  NoisePath path = sample_brownian(26, 1e-3, 200, 1);
  Spectral sp(kGrid);
  for (int s = 0; s < path.n_steps; ++s) {
    double dW = path.increment(s, 0);
    w = salt_euler_step(w, noise, path.dt, std::span<const double>(&dW, 1));
    CHECK(std::abs(sp.mean(plane_of(w, 0))) < 1e-12);
  }
}

TEST_CASE("salt_euler: CFL guard triggers a typed error") {
  Field w = taylor_green_vorticity(kGrid, 1.0);
  NoiseModel off = no_noise(Realization::euler2d);
  SaltOptions opt;
  opt.cfl_limit = 1e-4;
  CHECK_THROWS_WITH_AS(salt_euler_step(w, off, 1e-2, {}, opt), doctest::Contains("cfl"), Error);
}

// ============================================================================
// Generic advected-field stepper
// ============================================================================

TEST_CASE("advect_step: constant scalar is unchanged") {
  Field a(kGrid, FieldKind::scalar, 2.5);
  VectorField u = random_divfree_velocity(kGrid, 3, 27);
  StochIncrement dchi;
  dchi.drift_field = &u;
  dchi.dt = 1e-3;
  Field a1 = advect_step(a, dchi);
  CHECK(max_abs_diff(a1, a) < 1e-12);
}

TEST_CASE("advect_step: density mass conserved over 1000 steps") {
  Field rho = random_band_limited_scalar(kGrid, 4, 28).as_kind(FieldKind::density);
  for (double& v : rho.data()) v = 1.0 + 0.3 * v;
  VectorField u = velocity_from_vorticity(taylor_green_vorticity(kGrid));
  double mass0 = integrate_domain(rho);
  StochIncrement dchi;
  dchi.drift_field = &u;
  dchi.dt = 1e-3;
  for (int s = 0; s < 1000; ++s) rho = advect_step(rho, dchi);
  CHECK(std::abs(integrate_domain(rho) - mass0) / std::abs(mass0) < 1e-8);
}

TEST_CASE("advect_step: scalar transport matches method of characteristics") {
  // steady single-mode velocity; trace sample points backwards with RK4
  Field psi(kGrid, FieldKind::scalar);
  for (int j = 0; j < kGrid.ny; ++j)
    for (int i = 0; i < kGrid.nx; ++i)
      psi.at(i, j) = 0.4 * std::cos(kGrid.x(i)) * std::cos(kGrid.y(j));
  Spectral sp(kGrid);
  auto p = plane_of(psi, 0);
  auto px = sp.deriv_x(p), py = sp.deriv_y(p);
  VectorField u(kGrid, FieldKind::vector);
  for (std::size_t n = 0; n < kGrid.nodes(); ++n) {
    u.data()[2 * n] = py[n];
    u.data()[2 * n + 1] = -px[n];
  }

  auto a0_fn = [](double x, double y) { return std::sin(x) * std::cos(2 * y); };
  Field a(kGrid, FieldKind::scalar);
  for (int j = 0; j < kGrid.ny; ++j)
    for (int i = 0; i < kGrid.nx; ++i) a.at(i, j) = a0_fn(kGrid.x(i), kGrid.y(j));

  const double T = 0.5, dt = 1e-3;
  StochIncrement dchi;
  dchi.drift_field = &u;
  dchi.dt = dt;
  for (int s = 0; s < static_cast<int>(T / dt); ++s) a = advect_step(a, dchi);

  // oracle: a(x, T) = a0(Phi_{-T}(x)) via RK4 on the analytic velocity
  // u = (psi_y, -psi_x) for psi = 0.4 cos x cos y
  auto vel = [](double x, double y, double* vx, double* vy) {
    *vx = -0.4 * std::cos(x) * std::sin(y);
    *vy = 0.4 * std::sin(x) * std::cos(y);
  };
  double worst = 0;
  const int nsub = 2000;
  const double h = -T / nsub;
  for (int j = 0; j < kGrid.ny; j += 4)
    for (int i = 0; i < kGrid.nx; i += 4) {
      double x = kGrid.x(i), y = kGrid.y(j);
      for (int s = 0; s < nsub; ++s) {
        double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y;
        vel(x, y, &k1x, &k1y);
        vel(x + 0.5 * h * k1x, y + 0.5 * h * k1y, &k2x, &k2y);
        vel(x + 0.5 * h * k2x, y + 0.5 * h * k2y, &k3x, &k3y);
        vel(x + h * k3x, y + h * k3y, &k4x, &k4y);
        x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
      }
      worst = std::max(worst, std::abs(a.at(i, j) - a0_fn(x, y)));
    }
  CHECK(worst < 1e-3);
}

// ============================================================================
// Particle reconstruction
// ============================================================================

TEST_CASE("reconstruct_particles: no drift, no noise, stationary points") {
  NoiseModel off = no_noise(Realization::euler2d);
  NoisePath path = sample_brownian(1, 1e-2, 10, 0);
  auto traj = reconstruct_particles({{1.0, 2.0}, {3.0, 4.0}}, {}, off, path);
  CHECK(traj.back()[0].first == 1.0);
  CHECK(traj.back()[1].second == 4.0);
}

TEST_CASE("reconstruct_particles: uniform drift gives exact displacement") {
  VectorField u(kGrid, FieldKind::vector);
  for (std::size_t n = 0; n < kGrid.nodes(); ++n) u.data()[2 * n] = 1.0;
  NoiseModel off = no_noise(Realization::euler2d);
  NoisePath path = sample_brownian(1, 1e-3, 1000, 0);
  auto traj = reconstruct_particles({{2.0, 3.0}}, {u}, off, path);
  CHECK(std::abs(traj.back()[0].first - 3.0) < 1e-12);
  CHECK(std::abs(traj.back()[0].second - 3.0) < 1e-12);
}

TEST_CASE("reconstruct_particles: solid-body rotation preserves the radius") {
  // linear velocity field about the domain center: bicubic interpolation is
  // exact, the midpoint update is a Cayley rotation
  VectorField u(kGrid, FieldKind::vector);
  const double cx = M_PI, cy = M_PI, Om = 1.0;
  for (int j = 0; j < kGrid.ny; ++j)
    for (int i = 0; i < kGrid.nx; ++i) {
      u.at(i, j, 0) = -Om * (kGrid.y(j) - cy);
      u.at(i, j, 1) = Om * (kGrid.x(i) - cx);
    }
  NoiseModel off = no_noise(Realization::euler2d);
  NoisePath path = sample_brownian(1, 1e-3, 1000, 0);
  auto traj = reconstruct_particles({{cx + 0.8, cy}}, {u}, off, path);
  double r0 = 0.8;
  for (const auto& snap : traj) {
    double r = std::hypot(snap[0].first - cx, snap[0].second - cy);
    CHECK(std::abs(r - r0) < 1e-6);
  }
}

// ============================================================================
// Legendre transform
// ============================================================================

TEST_CASE("legendre_transform: rigid body quadratic form") {
  auto L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
  auto [m, h] = legendre_transform(L, {1.0, 1.0, 1.0}, {});
  CHECK(m.x == doctest::Approx(1.0));
  CHECK(m.y == doctest::Approx(2.0));
  CHECK(m.z == doctest::Approx(3.0));
  CHECK(h == doctest::Approx(3.0).epsilon(1e-14));

  // quadratic Lagrangian: h(m) = l(u) at matched points
  CHECK(h == doctest::Approx(L.ell({1, 1, 1}, {})).epsilon(1e-14));

  // round trip u -> m -> u
  Vec3 u{0.3, -0.7, 2.1};
  CHECK(norm(L.velocity(L.momentum(u)) - u) < 1e-12);
}

TEST_CASE("legendre_transform: fluid momentum round trip is exact") {
  auto L = LagrangianModel::euler2d_kinetic();
  VectorField u = random_divfree_velocity(kGrid, 4, 51);
  Field m = L.momentum(u);
  VectorField back = L.velocity_from_momentum(m);
  CHECK(max_abs_diff(back, u) == 0.0);
  CHECK(m.kind() == FieldKind::one_form);
}
