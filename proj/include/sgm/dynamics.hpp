#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sgm/lagrangian.hpp"
#include "sgm/noise.hpp"

namespace sgm {

/// Fixed-point control for the implicit-midpoint steppers. Failure to
/// converge within max_iterations is an error, never silent degradation.
struct MidpointOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

/// Generic Stratonovich implicit-midpoint step on a flat state vector:
///   y1 = y0 + f(y*) dt + sum_i g_i(y*) dW_i,   y* = (y0 + y1)/2.
/// The deterministic limit (no channels) is plain implicit midpoint.
struct SdeSystem {
  std::function<std::vector<double>(const std::vector<double>&)> drift;
  std::vector<std::function<std::vector<double>(const std::vector<double>&)>> diffusion;
};

std::vector<double> stratonovich_step(const std::vector<double>& y, const SdeSystem& sys,
                                      double dt, std::span<const double> dW,
                                      const MidpointOptions& opt = {});

/// One Stratonovich midpoint step of the finite-dimensional Lie-Poisson flow
///   dm = (m x u + a x dh/da) dt + sum_i (m x xi_i) o dW_i
///   da = (a x u) dt            + sum_i (a x xi_i) o dW_i
/// with u = dh/dm. Casimirs (|m|^2; m.a and |a|^2) are invariant along every
/// term, so the midpoint rule preserves them to solver tolerance.
DualElement lie_poisson_step(const DualElement& y, const LagrangianModel& L,
                             const NoiseModel& noise, double dt, std::span<const double> dW,
                             const MidpointOptions& opt = {});

/// Deterministic counterpart (identical code path with zero channels).
DualElement lie_poisson_step_deterministic(const DualElement& y, const LagrangianModel& L,
                                           double dt, const MidpointOptions& opt = {});

/// Full trajectory along a noise path; returns n_steps + 1 states.
std::vector<DualElement> lie_poisson_trajectory(const DualElement& y0, const LagrangianModel& L,
                                                const NoiseModel& noise, const NoisePath& path,
                                                const MidpointOptions& opt = {});

struct SaltOptions {
  bool self_advection = true;    // drift u = Biot-Savart(omega); off = noise-only transport
  double buoyancy_gravity = 0;   // momentum source -g b e_y when a buoyancy field is present
  double cfl_limit = 0.5;
  bool cfl_is_error = true;
  double dealias_fraction = 1.0 / 3.0;
  MidpointOptions midpoint{};
};

/// One Stratonovich midpoint step of 2D SALT Euler in vorticity form,
/// d omega + (dchi . grad) omega = 0 with dchi = u dt + sum xi_i o dW_i.
Field salt_euler_step(const Field& omega, const NoiseModel& noise, double dt,
                      std::span<const double> dW, const SaltOptions& opt = {});

/// Stratonovich midpoint step of da + L_dchi a = 0 for the field's kind.
/// The transporting increment is external data, frozen over the step.
Field advect_step(const Field& a, const StochIncrement& dchi, const MidpointOptions& opt = {});

/// Midpoint update of particle positions dx = u(x) dt + sum xi_i(x) o dW_i.
/// u_series holds the drift at step times (n_steps + 1 entries, or exactly 1
/// for a steady field); time interpolation is by step midpoint averaging.
std::vector<std::vector<std::pair<double, double>>> reconstruct_particles(
    const std::vector<std::pair<double, double>>& points,
    const std::vector<VectorField>& u_series, const NoiseModel& noise, const NoisePath& path,
    const MidpointOptions& opt = {});

/// Single-step point update shared by particles, loops and flow maps.
std::pair<double, double> midpoint_point_update(double x, double y,
                                                const VectorField* drift, double dt,
                                                const VectorField* noise_disp,
                                                const MidpointOptions& opt);

/// Combined noise displacement sum_i xi_i dW_i for one step (empty -> null).
std::optional<VectorField> noise_displacement(const NoiseModel& noise,
                                              std::span<const double> dW);

}  // namespace sgm
