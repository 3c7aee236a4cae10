#include "sgm/config.hpp"

#include <filesystem>
#include <fstream>

namespace sgm {

namespace {

Realization realization_from_string(const std::string& s) {
  if (s == "rigid_body") return Realization::rigid_body;
  if (s == "heavy_top") return Realization::heavy_top;
  if (s == "euler2d") return Realization::euler2d;
  throw Error(ErrorCode::invalid_argument, "unknown realization '" + s + "'");
}

nlohmann::json vec_to_json(const Vec3& v) { return {v.x, v.y, v.z}; }

Vec3 vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3)
    throw Error(ErrorCode::invalid_argument, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

nlohmann::json modes_to_json(const std::vector<TrigMode>& ms) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : ms) arr.push_back({m.kx, m.ky, m.amp_cos, m.amp_sin});
  return arr;
}

std::vector<TrigMode> modes_from_json(const nlohmann::json& j) {
  std::vector<TrigMode> ms;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 4)
      throw Error(ErrorCode::invalid_argument, "mode entries are [kx, ky, amp_cos, amp_sin]");
    ms.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>(), e[3].get<double>()});
  }
  return ms;
}

nlohmann::json field_init_to_json(const FieldInit& f) {
  nlohmann::json j;
  j["type"] = f.type;
  j["amplitude"] = f.amplitude;
  j["kmax"] = f.kmax;
  j["seed"] = f.seed;
  j["modes"] = modes_to_json(f.modes);
  return j;
}

FieldInit field_init_from_json(const nlohmann::json& j) {
  FieldInit f;
  f.type = j.value("type", f.type);
  f.amplitude = j.value("amplitude", f.amplitude);
  f.kmax = j.value("kmax", f.kmax);
  f.seed = j.value("seed", f.seed);
  if (j.contains("modes")) f.modes = modes_from_json(j["modes"]);
  return f;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(dt > 0)) throw Error(ErrorCode::invalid_argument, "dt must be positive");
  if (!(T >= dt)) throw Error(ErrorCode::invalid_argument, "T must be at least dt");
  if (ensemble < 1) throw Error(ErrorCode::invalid_argument, "ensemble size must be >= 1");
  if (realization == Realization::euler2d) {
    Grid2D probe(nx, ny, Lx, Ly);  // shares the grid invariants
    (void)probe;
    if (with_loop && loop_n < 16)
      throw Error(ErrorCode::invalid_argument, "loop needs at least 16 points");
  }
  for (const auto& xi : xis) {
    if (xi.type == "constant") {
      if (realization == Realization::euler2d)
        throw Error(ErrorCode::invalid_argument, "constant xi is for finite-dim realizations");
    } else if (xi.type == "stream_modes") {
      if (realization != Realization::euler2d)
        throw Error(ErrorCode::invalid_argument, "stream_modes xi is for the fluid realization");
    } else if (xi.type == "sgmf") {
      if (!std::filesystem::exists(xi.path))
        throw Error(ErrorCode::io_failure, "xi field file does not exist: " + xi.path);
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown xi type '" + xi.type + "'");
    }
  }
  if (!(fixed_point_tol > 0) || !(cfl_limit > 0))
    throw Error(ErrorCode::invalid_argument, "tolerances must be positive");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["realization"] = to_string(c.realization);
  j["model"] = {{"inertia", vec_to_json(c.inertia)},
                {"mgl", c.mgl},
                {"chi", vec_to_json(c.chi)},
                {"m0", vec_to_json(c.m0)},
                {"a0", vec_to_json(c.a0)},
                {"buoyancy_gravity", c.buoyancy_gravity}};
  j["grid"] = {{"nx", c.nx}, {"ny", c.ny}, {"Lx", c.Lx}, {"Ly", c.Ly}};
  j["initial"] = {{"vorticity", field_init_to_json(c.vorticity)}};
  if (c.buoyancy) j["initial"]["buoyancy"] = field_init_to_json(*c.buoyancy);
  nlohmann::json xis = nlohmann::json::array();
  for (const auto& xi : c.xis) {
    nlohmann::json e;
    e["type"] = xi.type;
    if (xi.type == "constant") e["value"] = vec_to_json(xi.value);
    if (xi.type == "stream_modes") e["modes"] = modes_to_json(xi.modes);
    if (xi.type == "sgmf") e["path"] = xi.path;
    xis.push_back(e);
  }
  j["noise"] = {{"amplitude", c.noise_amplitude}, {"xis", xis}};
  j["time"] = {{"dt", c.dt}, {"T", c.T}};
  j["seed"] = c.seed;
  j["ensemble"] = c.ensemble;
  j["loop"] = {{"enabled", c.with_loop},
               {"center", nlohmann::json{c.loop_cx, c.loop_cy}},
               {"radius", c.loop_radius},
               {"n", c.loop_n}};
  j["output"] = {{"dir", c.out_dir}, {"save_interval", c.save_interval}};
  j["tolerances"] = {{"fixed_point", c.fixed_point_tol},
                     {"cfl", c.cfl_limit},
                     {"kelvin_drift", c.kelvin_drift_tol}};
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("preset")) c = preset_config(j["preset"].get<std::string>());
  if (j.contains("realization")) c.realization = realization_from_string(j["realization"]);
  if (j.contains("model")) {
    const auto& m = j["model"];
    if (m.contains("inertia")) c.inertia = vec_from_json(m["inertia"]);
    c.mgl = m.value("mgl", c.mgl);
    if (m.contains("chi")) c.chi = vec_from_json(m["chi"]);
    if (m.contains("m0")) c.m0 = vec_from_json(m["m0"]);
    if (m.contains("a0")) c.a0 = vec_from_json(m["a0"]);
    c.buoyancy_gravity = m.value("buoyancy_gravity", c.buoyancy_gravity);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    c.nx = g.value("nx", c.nx);
    c.ny = g.value("ny", c.ny);
    c.Lx = g.value("Lx", c.Lx);
    c.Ly = g.value("Ly", c.Ly);
  }
  if (j.contains("initial")) {
    const auto& init = j["initial"];
    if (init.contains("vorticity")) c.vorticity = field_init_from_json(init["vorticity"]);
    if (init.contains("buoyancy")) c.buoyancy = field_init_from_json(init["buoyancy"]);
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    c.noise_amplitude = n.value("amplitude", c.noise_amplitude);
    if (n.contains("xis")) {
      c.xis.clear();
      for (const auto& e : n["xis"]) {
        XiSpec xi;
        xi.type = e.value("type", std::string("constant"));
        if (e.contains("value")) xi.value = vec_from_json(e["value"]);
        if (e.contains("modes")) xi.modes = modes_from_json(e["modes"]);
        xi.path = e.value("path", std::string());
        c.xis.push_back(std::move(xi));
      }
    }
  }
  if (j.contains("time")) {
    c.dt = j["time"].value("dt", c.dt);
    c.T = j["time"].value("T", c.T);
  }
  c.seed = j.value("seed", c.seed);
  c.ensemble = j.value("ensemble", c.ensemble);
  if (j.contains("loop")) {
    const auto& l = j["loop"];
    c.with_loop = l.value("enabled", c.with_loop);
    if (l.contains("center")) {
      c.loop_cx = l["center"][0].get<double>();
      c.loop_cy = l["center"][1].get<double>();
    }
    c.loop_radius = l.value("radius", c.loop_radius);
    c.loop_n = l.value("n", c.loop_n);
  }
  if (j.contains("output")) {
    c.out_dir = j["output"].value("dir", c.out_dir);
    c.save_interval = j["output"].value("save_interval", c.save_interval);
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    c.fixed_point_tol = t.value("fixed_point", c.fixed_point_tol);
    c.cfl_limit = t.value("cfl", c.cfl_limit);
    c.kelvin_drift_tol = t.value("kelvin_drift", c.kelvin_drift_tol);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

std::vector<std::string> preset_names() {
  return {"rigid_body", "heavy_top", "euler2d_kelvin", "boussinesq_budget"};
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  if (name == "rigid_body") {
    c.realization = Realization::rigid_body;
    c.inertia = {1.0, 2.0, 3.0};
    c.m0 = {0.6, 0.4, 1.2};
    c.dt = 1e-3;
    c.T = 10.0;
    c.xis = {};  // deterministic by default; add constant channels to enable noise
    c.out_dir = "out_rigid";
    return c;
  }
  if (name == "heavy_top") {
    c.realization = Realization::heavy_top;
    c.inertia = {1.0, 1.4, 2.2};
    c.mgl = 1.0;
    c.chi = {0.0, 0.0, 1.0};
    c.m0 = {0.5, -0.3, 0.8};
    c.a0 = {0.1, 0.2, 0.97};
    c.dt = 1e-3;
    c.T = 10.0;
    XiSpec xi;
    xi.type = "constant";
    xi.value = {0.0, 0.0, 1.0};
    c.xis = {xi};
    c.noise_amplitude = 0.3;
    c.out_dir = "out_heavy_top";
    return c;
  }
  if (name == "euler2d_kelvin") {
    c.realization = Realization::euler2d;
    c.nx = 64;
    c.ny = 64;
    c.vorticity = {.type = "taylor_green_perturbed", .amplitude = 1.0, .kmax = 3, .seed = 11,
                   .modes = {}};
    XiSpec xi1, xi2;
    xi1.type = "stream_modes";
    xi1.modes = {{2, 1, 0.02, 0.0}, {1, 3, 0.0, 0.015}};
    xi2.type = "stream_modes";
    xi2.modes = {{3, 2, 0.0, 0.018}, {1, 1, 0.012, 0.0}};
    c.xis = {xi1, xi2};
    c.dt = 5e-4;
    c.T = 1.0;
    c.loop_cx = M_PI / 2;
    c.loop_cy = M_PI / 2;
    c.loop_radius = 1.2;
    c.loop_n = 256;
    c.out_dir = "out_kelvin";
    return c;
  }
  if (name == "boussinesq_budget") {
    c.realization = Realization::euler2d;
    c.nx = 64;
    c.ny = 64;
    c.buoyancy_gravity = 1.0;
    c.vorticity = {.type = "taylor_green_perturbed", .amplitude = 0.8, .kmax = 2, .seed = 5,
                   .modes = {}};
    c.buoyancy = FieldInit{.type = "modes", .amplitude = 1.0, .kmax = 2, .seed = 6,
                           .modes = {{1, 0, 0.0, 0.25}, {1, 1, 0.15, 0.0}, {0, 1, 0.0, 0.1}}};
    XiSpec xi;
    xi.type = "stream_modes";
    xi.modes = {{2, 2, 0.01, 0.0}};
    c.xis = {xi};
    c.dt = 5e-4;
    c.T = 0.5;
    c.loop_cx = M_PI / 2;
    c.loop_cy = M_PI / 2;
    c.loop_radius = 1.0;
    c.loop_n = 256;
    c.out_dir = "out_budget";
    return c;
  }
  throw Error(ErrorCode::invalid_argument, "unknown preset '" + name + "'");
}

}  // namespace sgm
