#pragma once

#include "sgm/dynamics.hpp"
#include "sgm/flowmap.hpp"

namespace sgm {

/// Closed material loop: ordered torus points, the segment n->1 implicit.
/// Positions are stored unwrapped so adjacent differences stay small.
struct MaterialLoop {
  std::vector<std::pair<double, double>> points;

  static MaterialLoop circle(double cx, double cy, double radius, int n);

  int size() const { return static_cast<int>(points.size()); }
  void validate() const;
  double max_spacing() const;

  /// Periodic cubic-spline resample to n points, uniform in chord length.
  MaterialLoop resampled(int n) const;
};

/// Kelvin-Noether quantity: trapezoidal line integral of (m / rho) along the
/// closed polyline. Exactly invariant under cyclic relabeling of the points.
double circulation(const MaterialLoop& loop, const Field& m, const Field& rho);

/// Convenience: circulation of the velocity one-form with unit density.
double circulation_of_velocity(const MaterialLoop& loop, const VectorField& u);

/// Moves every point by the same Stratonovich midpoint rule as fluid
/// particles. Resamples (periodic spline) when the spacing bound is violated.
MaterialLoop advect_loop(const MaterialLoop& loop, const StochIncrement& dchi,
                         double max_spacing_cells = 4.0, const MidpointOptions& opt = {});

/// Line integral of (1/rho) (dl/da <> a) along the loop, where the momentum
/// source one-form is a grad(dl/da); dl_da may be a scalar potential or its
/// gradient one-form (for potentials linear in the coordinates).
double diamond_source_integral(const MaterialLoop& loop, const Field& dl_da, const Field& a,
                               const Field& rho);

struct CirculationRecord {
  std::vector<double> times;
  std::vector<double> I_values;
  std::vector<double> source_values;  // cumulative integral of the diamond source
};

struct BudgetOptions {
  SaltOptions salt{};
  double loop_max_spacing_cells = 4.0;
  bool track_flow_map = false;
  int observe_interval = 0;  // call the observer every k steps (0 = never)
  std::function<void(int step, const Field& omega, const Field* buoyancy)> observer;
};

struct BudgetResult {
  CirculationRecord record;
  Field omega;                       // final vorticity
  std::optional<Field> buoyancy;     // final advected scalar, if configured
  MaterialLoop loop;                 // final loop
  std::optional<FlowMap2D> flow_map; // final flow map, if tracked
};

/// Co-evolves vorticity, the optional buoyancy scalar and the material loop
/// on one noise path, recording I(t) and the accumulated diamond source.
BudgetResult run_circulation_budget(const Field& omega0, const std::optional<Field>& buoyancy0,
                                    const MaterialLoop& loop0, const NoiseModel& noise,
                                    const NoisePath& path, const BudgetOptions& opt = {});

}  // namespace sgm
