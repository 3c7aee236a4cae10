#include "sgm/loop.hpp"

#include <cmath>

namespace sgm {

namespace {

/// Periodic natural cubic spline through (t_k, f_k), period t_total.
/// Solves the cyclic tridiagonal system for second derivatives.
class PeriodicSpline {
 public:
  PeriodicSpline(std::vector<double> t, std::vector<double> f, double t_total)
      : t_(std::move(t)), f_(std::move(f)), T_(t_total) {
    const int n = static_cast<int>(t_.size());
    std::vector<double> h(n);
    for (int k = 0; k < n; ++k) {
      double t_next = (k + 1 < n) ? t_[k + 1] : t_[0] + T_;
      h[k] = t_next - t_[k];
    }
    std::vector<double> a(n), b(n), c(n), d(n);
    for (int k = 0; k < n; ++k) {
      int km = (k + n - 1) % n;
      a[k] = h[km];
      b[k] = 2.0 * (h[km] + h[k]);
      c[k] = h[k];
      double fp = f_[(k + 1) % n], fm = f_[km];
      d[k] = 6.0 * ((fp - f_[k]) / h[k] - (f_[k] - fm) / h[km]);
    }
    m_ = solve_cyclic(a, b, c, d);
    h_ = std::move(h);
  }

  double eval(double t) const {
    const int n = static_cast<int>(t_.size());
    t = std::fmod(t - t_[0], T_);
    if (t < 0) t += T_;
    t += t_[0];
    int k = static_cast<int>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin()) - 1;
    if (k < 0) k = 0;
    if (k >= n) k = n - 1;
    double h = h_[k];
    double fa = f_[k], fb = f_[(k + 1) % n];
    double ma = m_[k], mb = m_[(k + 1) % n];
    double x1 = t - t_[k], x2 = h - x1;
    return (ma * x2 * x2 * x2 + mb * x1 * x1 * x1) / (6.0 * h) +
           (fa / h - ma * h / 6.0) * x2 + (fb / h - mb * h / 6.0) * x1;
  }

 private:
  static std::vector<double> solve_cyclic(std::vector<double> a, std::vector<double> b,
                                          std::vector<double> c, std::vector<double> d) {
    // Sherman-Morrison on top of the Thomas algorithm.
    const int n = static_cast<int>(a.size());
    double alpha = a[0], beta = c[n - 1], gamma = -b[0];
    std::vector<double> bb(b);
    bb[0] -= gamma;
    bb[n - 1] -= alpha * beta / gamma;
    auto thomas = [&](std::vector<double> rhs) {
      std::vector<double> cp(n), dp(n);
      cp[0] = c[0] / bb[0];
      dp[0] = rhs[0] / bb[0];
      for (int i = 1; i < n; ++i) {
        double m = bb[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
      }
      for (int i = n - 2; i >= 0; --i) dp[i] -= cp[i] * dp[i + 1];
      return dp;
    };
    auto x = thomas(d);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = beta;
    auto z = thomas(u);
    double fact = (x[0] + a[0] * x[n - 1] / gamma) / (1.0 + z[0] + a[0] * z[n - 1] / gamma);
    for (int i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
  }

  std::vector<double> t_, f_, h_, m_;
  double T_;
};

}  // namespace

MaterialLoop MaterialLoop::circle(double cx, double cy, double radius, int n) {
  MaterialLoop loop;
  loop.points.resize(n);
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * M_PI * k / n;
    loop.points[k] = {cx + radius * std::cos(th), cy + radius * std::sin(th)};
  }
  loop.validate();
  return loop;
}

void MaterialLoop::validate() const {
  if (size() < 16) throw Error(ErrorCode::invalid_argument, "a loop needs at least 16 points");
  for (auto& [x, y] : points)
    if (!std::isfinite(x) || !std::isfinite(y))
      throw Error(ErrorCode::invalid_argument, "loop point is not finite");
}

double MaterialLoop::max_spacing() const {
  double m = 0;
  const int n = size();
  for (int k = 0; k < n; ++k) {
    auto [x0, y0] = points[k];
    auto [x1, y1] = points[(k + 1) % n];
    m = std::max(m, std::hypot(x1 - x0, y1 - y0));
  }
  return m;
}

MaterialLoop MaterialLoop::resampled(int n) const {
  const int old_n = size();
  std::vector<double> t(old_n), xs(old_n), ys(old_n);
  double acc = 0;
  for (int k = 0; k < old_n; ++k) {
    t[k] = acc;
    xs[k] = points[k].first;
    ys[k] = points[k].second;
    auto [x1, y1] = points[(k + 1) % old_n];
    acc += std::hypot(x1 - points[k].first, y1 - points[k].second);
  }
  PeriodicSpline sx(t, xs, acc), sy(t, ys, acc);
  MaterialLoop out;
  out.points.resize(n);
  for (int k = 0; k < n; ++k) {
    double tk = acc * k / n;
    out.points[k] = {sx.eval(tk), sy.eval(tk)};
  }
  out.validate();
  return out;
}

namespace {

double line_integral_of_one_form(const MaterialLoop& loop, const Field& form, const Field* rho) {
  double vals[2];
  const int n = loop.size();
  std::vector<double> fx(n), fy(n);
  for (int k = 0; k < n; ++k) {
    interpolate_at(form, loop.points[k].first, loop.points[k].second, vals);
    double w = 1.0;
    if (rho) {
      double r;
      interpolate_at(*rho, loop.points[k].first, loop.points[k].second, &r);
      if (!(r > 0)) throw Error(ErrorCode::nonpositive_density, "density must be positive on the loop");
      w = 1.0 / r;
    }
    fx[k] = vals[0] * w;
    fy[k] = vals[1] * w;
  }
  double I = 0;
  for (int k = 0; k < n; ++k) {
    int kp = (k + 1) % n;
    double dx = loop.points[kp].first - loop.points[k].first;
    double dy = loop.points[kp].second - loop.points[k].second;
    I += 0.5 * ((fx[k] + fx[kp]) * dx + (fy[k] + fy[kp]) * dy);
  }
  return I;
}

}  // namespace

double circulation(const MaterialLoop& loop, const Field& m, const Field& rho) {
  require_kind(m, FieldKind::one_form, "circulation integrates a momentum one-form");
  require_same_grid(m, rho);
  loop.validate();
  double min_rho = rho.data()[0];
  for (double v : rho.data()) min_rho = std::min(min_rho, v);
  if (!(min_rho > 0)) throw Error(ErrorCode::nonpositive_density, "density must be positive");
  return line_integral_of_one_form(loop, m, &rho);
}

double circulation_of_velocity(const MaterialLoop& loop, const VectorField& u) {
  return line_integral_of_one_form(loop, flat(u), nullptr);
}

MaterialLoop advect_loop(const MaterialLoop& loop, const StochIncrement& dchi,
                         double max_spacing_cells, const MidpointOptions& opt) {
  loop.validate();
  std::optional<VectorField> xi_disp;
  if (dchi.noise) xi_disp = noise_displacement(*dchi.noise, dchi.dW);
  MaterialLoop out = loop;
  for (auto& [x, y] : out.points) {
    auto [nx, ny] = midpoint_point_update(x, y, dchi.drift_field, dchi.dt,
                                          xi_disp ? &*xi_disp : nullptr, opt);
    x = nx;
    y = ny;
  }
  const Grid2D* g = nullptr;
  if (dchi.drift_field) g = &dchi.drift_field->grid();
  else if (dchi.noise && !dchi.noise->xi_fields.empty()) g = &dchi.noise->xi_fields[0].grid();
  if (g) {
    double cell = std::min(g->dx(), g->dy());
    if (out.max_spacing() > max_spacing_cells * cell) out = out.resampled(out.size());
  }
  return out;
}

double diamond_source_integral(const MaterialLoop& loop, const Field& dl_da, const Field& a,
                               const Field& rho) {
  Field source = ep_momentum_source(dl_da, a);
  double min_rho = rho.data()[0];
  for (double v : rho.data()) min_rho = std::min(min_rho, v);
  if (!(min_rho > 0)) throw Error(ErrorCode::nonpositive_density, "density must be positive");
  return line_integral_of_one_form(loop, source, &rho);
}

BudgetResult run_circulation_budget(const Field& omega0, const std::optional<Field>& buoyancy0,
                                    const MaterialLoop& loop0, const NoiseModel& noise,
                                    const NoisePath& path, const BudgetOptions& opt) {
  require_kind(omega0, FieldKind::scalar, "vorticity must be scalar");
  noise.validate();
  loop0.validate();
  const Grid2D& grid = omega0.grid();
  Spectral sp(grid);
  const SaltOptions& so = opt.salt;
  const double g = so.buoyancy_gravity;
  const bool with_b = buoyancy0.has_value();
  if (with_b) require_same_grid(omega0, *buoyancy0);

  Field rho(grid, FieldKind::density, 1.0);
  Field dl_da_grad(grid, FieldKind::one_form);
  if (with_b)
    for (std::size_t n = 0; n < grid.nodes(); ++n) dl_da_grad.data()[2 * n + 1] = -g;

  auto velocity_of = [&](const std::vector<double>& w) {
    Field wf(grid, FieldKind::scalar);
    wf.data() = w;
    return velocity_from_vorticity(wf);
  };

  std::vector<double> w0 = plane_of(omega0, 0);
  sp.subtract_mean(w0);
  std::vector<double> b0;
  if (with_b) b0 = plane_of(*buoyancy0, 0);
  MaterialLoop loop = loop0;
  std::optional<FlowMap2D> fmap;
  if (opt.track_flow_map) fmap.emplace(grid);

  BudgetResult result{.record = {}, .omega = omega0, .buoyancy = buoyancy0, .loop = loop0,
                      .flow_map = std::nullopt};
  double cumulative_source = 0;
  {
    VectorField u0 = velocity_of(w0);
    result.record.times.push_back(0.0);
    result.record.I_values.push_back(circulation(loop, flat(u0), rho));
    result.record.source_values.push_back(0.0);
  }

  const double cell = std::min(grid.dx(), grid.dy());
  for (int s = 0; s < path.n_steps; ++s) {
    std::span<const double> dW(path.increments.data() + static_cast<std::size_t>(s) * path.channels,
                               path.channels);
    auto xi_disp = noise_displacement(noise, dW);

    std::vector<double> w1 = w0, b1 = b0;
    auto pts1 = loop.points;
    std::optional<VectorField> umid;
    double residual = 0;
    int it = 0;
    for (; it < so.midpoint.max_iterations; ++it) {
      std::vector<double> wmid(w0.size());
      for (std::size_t n = 0; n < w0.size(); ++n) wmid[n] = 0.5 * (w0[n] + w1[n]);
      umid = so.self_advection ? std::optional<VectorField>(velocity_of(wmid)) : std::nullopt;
      const VectorField* uptr = umid ? &*umid : nullptr;
      const VectorField* xptr = xi_disp ? &*xi_disp : nullptr;

      residual = 0;
      // vorticity with the buoyancy torque -g d_x b
      {
        std::vector<double> incr(w0.size(), 0.0);
        auto wx = sp.deriv_x(wmid), wy = sp.deriv_y(wmid);
        for (std::size_t n = 0; n < w0.size(); ++n) {
          double cx = 0, cy = 0;
          if (uptr) { cx += uptr->data()[2 * n] * path.dt; cy += uptr->data()[2 * n + 1] * path.dt; }
          if (xptr) { cx += xptr->data()[2 * n]; cy += xptr->data()[2 * n + 1]; }
          incr[n] = cx * wx[n] + cy * wy[n];
        }
        if (with_b) {
          std::vector<double> bmid(b0.size());
          for (std::size_t n = 0; n < b0.size(); ++n) bmid[n] = 0.5 * (b0[n] + b1[n]);
          auto bx = sp.deriv_x(bmid);
          for (std::size_t n = 0; n < w0.size(); ++n) incr[n] += g * bx[n] * path.dt;
        }
        sp.truncate_modes(incr, so.dealias_fraction);
        sp.subtract_mean(incr);
        for (std::size_t n = 0; n < w0.size(); ++n) {
          double trial = w0[n] - incr[n];
          residual = std::max(residual, std::abs(trial - w1[n]));
          w1[n] = trial;
        }
      }
      if (with_b) {
        std::vector<double> bmid(b0.size());
        for (std::size_t n = 0; n < b0.size(); ++n) bmid[n] = 0.5 * (b0[n] + b1[n]);
        auto bx = sp.deriv_x(bmid), by = sp.deriv_y(bmid);
        std::vector<double> incr(b0.size());
        for (std::size_t n = 0; n < b0.size(); ++n) {
          double cx = 0, cy = 0;
          if (umid) { cx += umid->data()[2 * n] * path.dt; cy += umid->data()[2 * n + 1] * path.dt; }
          if (xi_disp) { cx += xi_disp->data()[2 * n]; cy += xi_disp->data()[2 * n + 1]; }
          incr[n] = cx * bx[n] + cy * by[n];
        }
        sp.truncate_modes(incr, so.dealias_fraction);
        sp.subtract_mean(incr);
        for (std::size_t n = 0; n < b0.size(); ++n) {
          double trial = b0[n] - incr[n];
          residual = std::max(residual, std::abs(trial - b1[n]));
          b1[n] = trial;
        }
      }
      // loop points with the same dchi
      {
        double val[2];
        for (std::size_t k = 0; k < pts1.size(); ++k) {
          double mx = 0.5 * (loop.points[k].first + pts1[k].first);
          double my = 0.5 * (loop.points[k].second + pts1[k].second);
          double dx = 0, dy = 0;
          if (umid) {
            interpolate_at(*umid, mx, my, val);
            dx += val[0] * path.dt;
            dy += val[1] * path.dt;
          }
          if (xi_disp) {
            interpolate_at(*xi_disp, mx, my, val);
            dx += val[0];
            dy += val[1];
          }
          double tx = loop.points[k].first + dx, ty = loop.points[k].second + dy;
          residual = std::max(residual, std::max(std::abs(tx - pts1[k].first),
                                                 std::abs(ty - pts1[k].second)));
          pts1[k] = {tx, ty};
        }
      }
      if (residual <= so.midpoint.tolerance) break;
    }
    if (residual > so.midpoint.tolerance) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "budget step %d residual %.3e", s, residual);
      throw Error(ErrorCode::fixed_point_diverged, buf);
    }
    if (s == 0) {
      double worst = 0;
      for (std::size_t n = 0; n < grid.nodes(); ++n) {
        double dxs = 0, dys = 0;
        if (umid) { dxs += std::abs(umid->data()[2 * n]) * path.dt; dys += std::abs(umid->data()[2 * n + 1]) * path.dt; }
        if (xi_disp) { dxs += std::abs(xi_disp->data()[2 * n]); dys += std::abs(xi_disp->data()[2 * n + 1]); }
        worst = std::max(worst, std::max(dxs / grid.dx(), dys / grid.dy()));
      }
      if (worst > so.cfl_limit) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "per-step displacement %.3f cells exceeds limit %.3f",
                      worst, so.cfl_limit);
        if (so.cfl_is_error) throw Error(ErrorCode::cfl_violation, buf);
        std::fprintf(stderr, "[sgm] CFL warning: %s\n", buf);
      }
    }

    // diamond source accumulated at the step midpoint (drift-only term)
    if (with_b) {
      MaterialLoop mid_loop = loop;
      for (std::size_t k = 0; k < pts1.size(); ++k)
        mid_loop.points[k] = {0.5 * (loop.points[k].first + pts1[k].first),
                              0.5 * (loop.points[k].second + pts1[k].second)};
      Field bmid(grid, FieldKind::scalar);
      for (std::size_t n = 0; n < b0.size(); ++n) bmid.data()[n] = 0.5 * (b0[n] + b1[n]);
      cumulative_source += path.dt * diamond_source_integral(mid_loop, dl_da_grad, bmid, rho);
    }

    if (fmap) {
      const VectorField* uptr = umid ? &*umid : nullptr;
      const VectorField* xptr = xi_disp ? &*xi_disp : nullptr;
      fmap->advance(uptr, path.dt, xptr, so.midpoint);
    }

    w0.swap(w1);
    if (with_b) b0.swap(b1);
    loop.points = std::move(pts1);
    if (loop.max_spacing() > opt.loop_max_spacing_cells * cell)
      loop = loop.resampled(loop.size());

    VectorField u_now = velocity_of(w0);
    result.record.times.push_back((s + 1) * path.dt);
    result.record.I_values.push_back(circulation(loop, flat(u_now), rho));
    result.record.source_values.push_back(cumulative_source);

    if (opt.observer && opt.observe_interval > 0 && (s + 1) % opt.observe_interval == 0) {
      Field wf(grid, FieldKind::scalar);
      wf.data() = w0;
      if (with_b) {
        Field bf(grid, FieldKind::scalar);
        bf.data() = b0;
        opt.observer(s + 1, wf, &bf);
      } else {
        opt.observer(s + 1, wf, nullptr);
      }
    }
  }

  result.omega = Field(grid, FieldKind::scalar);
  result.omega.data() = w0;
  if (with_b) {
    Field bf(grid, FieldKind::scalar);
    bf.data() = b0;
    result.buoyancy = std::move(bf);
  }
  result.loop = loop;
  if (fmap) result.flow_map = std::move(fmap);
  return result;
}

}  // namespace sgm
