#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgm/algebra.hpp"
#include "sgm/analytic.hpp"

namespace sgm {

/// One noise channel: a constant so(3) vector, a stream-function mode sum, or
/// an SGMF file holding the velocity field.
struct XiSpec {
  std::string type;  // "constant" | "stream_modes" | "sgmf"
  Vec3 value{};
  std::vector<TrigMode> modes;
  std::string path;
};

struct FieldInit {
  std::string type = "taylor_green";  // "taylor_green" | "random" | "modes" | "zero"
  double amplitude = 1.0;
  int kmax = 3;
  std::uint64_t seed = 7;
  std::vector<TrigMode> modes;
};

struct ExperimentConfig {
  Realization realization = Realization::rigid_body;

  // finite-dim model parameters
  Vec3 inertia{1.0, 2.0, 3.0};
  double mgl = 1.0;
  Vec3 chi{0.0, 0.0, 1.0};
  Vec3 m0{0.6, 0.4, 1.2};
  Vec3 a0{0.0, 0.0, 1.0};

  // fluid model
  int nx = 64, ny = 64;
  double Lx = 2.0 * M_PI, Ly = 2.0 * M_PI;
  double buoyancy_gravity = 0.0;
  FieldInit vorticity{};
  std::optional<FieldInit> buoyancy;

  // noise
  double noise_amplitude = 1.0;
  std::vector<XiSpec> xis;

  // time / seeding / ensemble
  double dt = 1e-3;
  double T = 1.0;
  std::uint64_t seed = 42;
  int ensemble = 1;

  // loop
  bool with_loop = true;
  double loop_cx = M_PI, loop_cy = M_PI, loop_radius = 1.2;
  int loop_n = 256;

  // output
  std::string out_dir = "out";
  int save_interval = 0;  // in steps; 0 = final state only

  // tolerances
  double fixed_point_tol = 1e-12;
  double cfl_limit = 0.5;
  double kelvin_drift_tol = 0.01;

  void validate() const;  // throws Error(invalid_argument / io_failure)
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Embedded presets: rigid_body, heavy_top, euler2d_kelvin, boussinesq_budget.
std::vector<std::string> preset_names();
ExperimentConfig preset_config(const std::string& name);

}  // namespace sgm
