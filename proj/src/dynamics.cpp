#include "sgm/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace sgm {

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
    m = std::max(m, d);
  }
  return m;
}

[[noreturn]] void throw_diverged(double residual, int iters) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "fixed point residual %.3e after %d iterations", residual, iters);
  throw Error(ErrorCode::fixed_point_diverged, buf);
}

}  // namespace

std::vector<double> stratonovich_step(const std::vector<double>& y, const SdeSystem& sys,
                                      double dt, std::span<const double> dW,
                                      const MidpointOptions& opt) {
  if (dW.size() != sys.diffusion.size())
    throw Error(ErrorCode::invalid_argument, "one Brownian increment per diffusion channel");
  const std::size_t n = y.size();
  std::vector<double> ynext(y), mid(n), incr(n);
  double residual = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (y[i] + ynext[i]);
    std::fill(incr.begin(), incr.end(), 0.0);
    if (sys.drift) {
      auto f = sys.drift(mid);
      for (std::size_t i = 0; i < n; ++i) incr[i] += dt * f[i];
    }
    for (std::size_t c = 0; c < sys.diffusion.size(); ++c) {
      auto g = sys.diffusion[c](mid);
      for (std::size_t i = 0; i < n; ++i) incr[i] += dW[c] * g[i];
    }
    std::vector<double> ytrial(n);
    for (std::size_t i = 0; i < n; ++i) ytrial[i] = y[i] + incr[i];
    residual = max_abs_diff(ytrial, ynext);
    ynext.swap(ytrial);
    if (residual <= opt.tolerance) return ynext;
  }
  throw_diverged(residual, opt.max_iterations);
}

// --- finite-dimensional Lie-Poisson -------------------------------------------

namespace {

struct FinitePair {
  Vec3 m, a;
};

FinitePair lie_poisson_increment(const FinitePair& mid, const LagrangianModel& L,
                                 const NoiseModel& noise, double dt,
                                 std::span<const double> dW) {
  Vec3 u = L.velocity(mid.m);
  FinitePair d;
  d.m = cross(mid.m, u) * dt;
  d.a = {0, 0, 0};
  if (L.realization() == Realization::heavy_top) {
    d.m += diamond(Realization::heavy_top, L.dh_da(mid.m, mid.a), mid.a) * dt;
    d.a += cross(mid.a, u) * dt;
  }
  for (std::size_t i = 0; i < dW.size(); ++i) {
    d.m += cross(mid.m, noise.xis[i]) * dW[i];
    if (L.realization() == Realization::heavy_top) d.a += cross(mid.a, noise.xis[i]) * dW[i];
  }
  return d;
}

}  // namespace

DualElement lie_poisson_step(const DualElement& y, const LagrangianModel& L,
                             const NoiseModel& noise, double dt, std::span<const double> dW,
                             const MidpointOptions& opt) {
  require_same_realization(y.realization(), L.realization());
  if (y.realization() == Realization::euler2d)
    throw Error(ErrorCode::unsupported_realization, "lie_poisson_step is finite-dimensional");
  require_same_realization(noise.realization, y.realization());
  if (static_cast<int>(dW.size()) != noise.channels())
    throw Error(ErrorCode::invalid_argument, "one Brownian increment per noise channel");

  FinitePair yn{y.m(), y.a()}, yn1 = yn, mid, trial;
  double residual = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    mid.m = (yn.m + yn1.m) * 0.5;
    mid.a = (yn.a + yn1.a) * 0.5;
    FinitePair d = lie_poisson_increment(mid, L, noise, dt, dW);
    trial.m = yn.m + d.m;
    trial.a = yn.a + d.a;
    residual = std::max(norm_inf(trial.m - yn1.m), norm_inf(trial.a - yn1.a));
    yn1 = trial;
    if (residual <= opt.tolerance) {
      if (y.realization() == Realization::rigid_body) return DualElement::rigid(yn1.m);
      return DualElement::heavy(yn1.m, yn1.a);
    }
  }
  throw_diverged(residual, opt.max_iterations);
}

DualElement lie_poisson_step_deterministic(const DualElement& y, const LagrangianModel& L,
                                           double dt, const MidpointOptions& opt) {
  NoiseModel off;
  off.realization = y.realization();
  return lie_poisson_step(y, L, off, dt, {}, opt);
}

std::vector<DualElement> lie_poisson_trajectory(const DualElement& y0, const LagrangianModel& L,
                                                const NoiseModel& noise, const NoisePath& path,
                                                const MidpointOptions& opt) {
  std::vector<DualElement> states;
  states.reserve(path.n_steps + 1);
  states.push_back(y0);
  for (int s = 0; s < path.n_steps; ++s) {
    std::span<const double> dW(path.increments.data() + static_cast<std::size_t>(s) * path.channels,
                               path.channels);
    states.push_back(lie_poisson_step(states.back(), L, noise, path.dt, dW, opt));
  }
  return states;
}

// --- fluid steppers ------------------------------------------------------------

std::optional<VectorField> noise_displacement(const NoiseModel& noise,
                                              std::span<const double> dW) {
  if (noise.channels() == 0) return std::nullopt;
  if (static_cast<int>(dW.size()) != noise.channels())
    throw Error(ErrorCode::invalid_argument, "one Brownian increment per noise channel");
  VectorField acc(noise.xi_fields[0].grid(), FieldKind::vector);
  for (std::size_t i = 0; i < dW.size(); ++i) {
    const auto& xi = noise.xi_fields[i];
    for (std::size_t n = 0; n < acc.data().size(); ++n) acc.data()[n] += dW[i] * xi.data()[n];
  }
  return acc;
}

namespace {

void check_cfl(const VectorField* drift, double dt, const VectorField* xi_disp,
               const SaltOptions& opt, const Grid2D& grid) {
  double worst = 0;
  std::size_t nodes = grid.nodes();
  for (std::size_t n = 0; n < nodes; ++n) {
    double dxs = 0, dys = 0;
    if (drift) {
      dxs += std::abs(drift->data()[2 * n]) * dt;
      dys += std::abs(drift->data()[2 * n + 1]) * dt;
    }
    if (xi_disp) {
      dxs += std::abs(xi_disp->data()[2 * n]);
      dys += std::abs(xi_disp->data()[2 * n + 1]);
    }
    worst = std::max(worst, std::max(dxs / grid.dx(), dys / grid.dy()));
  }
  if (worst > opt.cfl_limit) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "per-step displacement %.3f cells exceeds limit %.3f",
                  worst, opt.cfl_limit);
    if (opt.cfl_is_error) throw Error(ErrorCode::cfl_violation, buf);
    std::fprintf(stderr, "[sgm] CFL warning: %s\n", buf);
  }
}

/// Advective increment (u dt + Xi) . grad f, dealiased and mean-free.
std::vector<double> transport_increment(const Spectral& sp, const std::vector<double>& f,
                                        const VectorField* drift, double dt,
                                        const VectorField* xi_disp, double dealias_fraction) {
  auto fx = sp.deriv_x(f);
  auto fy = sp.deriv_y(f);
  std::vector<double> incr(f.size(), 0.0);
  for (std::size_t n = 0; n < f.size(); ++n) {
    double cx = 0, cy = 0;
    if (drift) {
      cx += drift->data()[2 * n] * dt;
      cy += drift->data()[2 * n + 1] * dt;
    }
    if (xi_disp) {
      cx += xi_disp->data()[2 * n];
      cy += xi_disp->data()[2 * n + 1];
    }
    incr[n] = cx * fx[n] + cy * fy[n];
  }
  sp.truncate_modes(incr, dealias_fraction);
  sp.subtract_mean(incr);
  return incr;
}

}  // namespace

Field salt_euler_step(const Field& omega, const NoiseModel& noise, double dt,
                      std::span<const double> dW, const SaltOptions& opt) {
  require_kind(omega, FieldKind::scalar, "vorticity must be scalar");
  noise.validate();
  Spectral sp(omega.grid());

  auto w0 = plane_of(omega, 0);
  {
    double m = sp.mean(w0);
    if (std::abs(m) > 1e-10 * std::max(1.0, max_abs(omega)))
      throw Error(ErrorCode::nonzero_mean, "vorticity must be mean-zero on the torus");
  }
  auto xi_disp = noise_displacement(noise, dW);

  std::vector<double> w1(w0);
  double residual = 0;
  for (int it = 0; it < opt.midpoint.max_iterations; ++it) {
    std::vector<double> wmid(w0.size());
    for (std::size_t n = 0; n < w0.size(); ++n) wmid[n] = 0.5 * (w0[n] + w1[n]);
    Field wmid_field(omega.grid(), FieldKind::scalar);
    wmid_field.data() = wmid;
    std::optional<VectorField> u;
    if (opt.self_advection) u = velocity_from_vorticity(wmid_field);
    if (it == 0) check_cfl(u ? &*u : nullptr, dt, xi_disp ? &*xi_disp : nullptr, opt, omega.grid());

    auto incr = transport_increment(sp, wmid, u ? &*u : nullptr, dt,
                                    xi_disp ? &*xi_disp : nullptr, opt.dealias_fraction);
    std::vector<double> wtrial(w0.size());
    for (std::size_t n = 0; n < w0.size(); ++n) wtrial[n] = w0[n] - incr[n];
    residual = max_abs_diff(wtrial, w1);
    w1.swap(wtrial);
    if (residual <= opt.midpoint.tolerance) {
      Field out(omega.grid(), FieldKind::scalar);
      out.data() = std::move(w1);
      return out;
    }
  }
  throw_diverged(residual, opt.midpoint.max_iterations);
}

Field advect_step(const Field& a, const StochIncrement& dchi, const MidpointOptions& opt) {
  Spectral sp(a.grid());
  const VectorField* drift = dchi.drift_field;
  std::optional<VectorField> xi_disp;
  if (dchi.noise) {
    dchi.noise->validate();
    xi_disp = noise_displacement(*dchi.noise, dchi.dW);
  }
  if (drift) require_same_grid(*drift, a);

  Field an = a, an1 = a;
  double residual = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    Field mid = an;
    for (std::size_t n = 0; n < mid.data().size(); ++n)
      mid.data()[n] = 0.5 * (an.data()[n] + an1.data()[n]);
    // L_dchi is linear in the transport: dt L_u + L_Xi, per tensor kind.
    Field incr(a.grid(), a.kind());
    if (drift) {
      Field lu = lie_derivative(*drift, mid);
      for (std::size_t n = 0; n < incr.data().size(); ++n) incr.data()[n] += dchi.dt * lu.data()[n];
    }
    if (xi_disp) {
      Field lxi = lie_derivative(*xi_disp, mid);
      for (std::size_t n = 0; n < incr.data().size(); ++n) incr.data()[n] += lxi.data()[n];
    }
    for (int c = 0; c < incr.comps(); ++c) {
      auto p = plane_of(incr, c);
      sp.truncate_modes(p);
      if (a.kind() == FieldKind::scalar || a.kind() == FieldKind::density) sp.subtract_mean(p);
      set_plane(incr, c, p);
    }
    Field trial = an;
    for (std::size_t n = 0; n < trial.data().size(); ++n)
      trial.data()[n] = an.data()[n] - incr.data()[n];
    residual = 0;
    for (std::size_t n = 0; n < trial.data().size(); ++n)
      residual = std::max(residual, std::abs(trial.data()[n] - an1.data()[n]));
    an1 = std::move(trial);
    if (residual <= opt.tolerance) return an1;
  }
  throw_diverged(residual, opt.max_iterations);
}

std::pair<double, double> midpoint_point_update(double x, double y,
                                                const VectorField* drift, double dt,
                                                const VectorField* noise_disp,
                                                const MidpointOptions& opt) {
  double xn = x, yn = y;
  double residual = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    double mx = 0.5 * (x + xn), my = 0.5 * (y + yn);
    double dx = 0, dy = 0, val[2];
    if (drift) {
      interpolate_at(*drift, mx, my, val);
      dx += val[0] * dt;
      dy += val[1] * dt;
    }
    if (noise_disp) {
      interpolate_at(*noise_disp, mx, my, val);
      dx += val[0];
      dy += val[1];
    }
    double tx = x + dx, ty = y + dy;
    residual = std::max(std::abs(tx - xn), std::abs(ty - yn));
    xn = tx;
    yn = ty;
    if (residual <= opt.tolerance) return {xn, yn};
  }
  throw_diverged(residual, opt.max_iterations);
}

std::vector<std::vector<std::pair<double, double>>> reconstruct_particles(
    const std::vector<std::pair<double, double>>& points,
    const std::vector<VectorField>& u_series, const NoiseModel& noise, const NoisePath& path,
    const MidpointOptions& opt) {
  noise.validate();
  if (noise.channels() != path.channels)
    throw Error(ErrorCode::invalid_argument, "noise channels and path channels differ");
  const bool steady = u_series.size() == 1;
  if (!u_series.empty() && !steady &&
      static_cast<int>(u_series.size()) != path.n_steps + 1)
    throw Error(ErrorCode::invalid_argument, "drift series needs n_steps + 1 entries");

  std::vector<std::vector<std::pair<double, double>>> traj(path.n_steps + 1);
  traj[0] = points;
  for (int s = 0; s < path.n_steps; ++s) {
    std::span<const double> dW(path.increments.data() + static_cast<std::size_t>(s) * path.channels,
                               path.channels);
    auto xi_disp = noise_displacement(noise, dW);
    std::optional<VectorField> ubar;
    if (!u_series.empty()) {
      if (steady) {
        ubar = u_series[0];
      } else {
        ubar = u_series[s];
        for (std::size_t n = 0; n < ubar->data().size(); ++n)
          ubar->data()[n] = 0.5 * (ubar->data()[n] + u_series[s + 1].data()[n]);
      }
    }
    traj[s + 1].resize(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      auto [px, py] = traj[s][p];
      if (!std::isfinite(px) || !std::isfinite(py))
        throw Error(ErrorCode::invalid_argument, "particle position out of numeric range");
      traj[s + 1][p] = midpoint_point_update(px, py, ubar ? &*ubar : nullptr, path.dt,
                                             xi_disp ? &*xi_disp : nullptr, opt);
    }
  }
  return traj;
}

}  // namespace sgm
