#include "sgm/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "sgm/checks.hpp"
#include "sgm/eof.hpp"
#include "sgm/field_io.hpp"
#include "sgm/loop.hpp"

namespace sgm {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path);
  out << text;
}

NoiseModel build_noise(const ExperimentConfig& c, const Grid2D* grid) {
  NoiseModel noise;
  noise.realization = c.realization;
  for (const auto& xi : c.xis) {
    if (xi.type == "constant") {
      noise.xis.push_back(xi.value * c.noise_amplitude);
      noise.labels.push_back("constant");
    } else if (xi.type == "stream_modes") {
      StreamVelocity sv;
      sv.psi.Lx = grid->Lx;
      sv.psi.Ly = grid->Ly;
      sv.psi.modes = xi.modes;
      sv.psi = sv.psi.scaled(c.noise_amplitude);
      noise.xi_fields.push_back(sv.sample(*grid));
      noise.labels.push_back("stream_modes");
    } else if (xi.type == "sgmf") {
      Field f = load_field(xi.path);
      require_kind(f, FieldKind::vector, "xi file must hold a vector field");
      if (grid && f.grid() != *grid)
        throw Error(ErrorCode::grid_mismatch, "xi field grid differs from run grid: " + xi.path);
      if (c.noise_amplitude != 1.0)
        for (double& v : f.data()) v *= c.noise_amplitude;
      noise.xi_fields.push_back(std::move(f));
      noise.labels.push_back(xi.path);
    }
  }
  noise.validate();
  return noise;
}

Field build_scalar_field(const FieldInit& init, const Grid2D& grid, bool mean_zero) {
  Field f(grid, FieldKind::scalar);
  if (init.type == "zero") {
    return f;
  } else if (init.type == "taylor_green") {
    f = taylor_green_vorticity(grid, init.amplitude);
  } else if (init.type == "taylor_green_perturbed") {
    f = taylor_green_vorticity(grid, init.amplitude);
    Field pert = random_band_limited_scalar(grid, init.kmax, init.seed);
    for (std::size_t n = 0; n < f.data().size(); ++n)
      f.data()[n] += 0.1 * init.amplitude * pert.data()[n];
  } else if (init.type == "random") {
    f = random_band_limited_scalar(grid, init.kmax, init.seed);
    for (double& v : f.data()) v *= init.amplitude;
  } else if (init.type == "modes") {
    FourierScalar s;
    s.Lx = grid.Lx;
    s.Ly = grid.Ly;
    s.modes = init.modes;
    f = s.scaled(init.amplitude).sample(grid);
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown field init '" + init.type + "'");
  }
  if (mean_zero) {
    Spectral sp(grid);
    auto p = plane_of(f, 0);
    sp.subtract_mean(p);
    set_plane(f, 0, p);
  }
  return f;
}

nlohmann::json run_finite_dim(const ExperimentConfig& c, const std::string& out_dir, bool quiet) {
  auto t_start = std::chrono::steady_clock::now();
  LagrangianModel L = c.realization == Realization::rigid_body
                          ? LagrangianModel::rigid_body(c.inertia)
                          : LagrangianModel::heavy_top(c.inertia, c.mgl, c.chi);
  NoiseModel noise = build_noise(c, nullptr);
  const int n = static_cast<int>(std::round(c.T / c.dt));
  NoisePath path = sample_brownian(c.seed, c.dt, n, noise.channels());
  DualElement y0 = c.realization == Realization::rigid_body ? DualElement::rigid(c.m0)
                                                            : DualElement::heavy(c.m0, c.a0);
  MidpointOptions mopt{c.fixed_point_tol, 50};
  auto states = lie_poisson_trajectory(y0, L, noise, path, mopt);

  const bool heavy = c.realization == Realization::heavy_top;
  std::string csv = heavy ? "t,m1,m2,m3,a1,a2,a3\n" : "t,m1,m2,m3\n";
  const std::size_t stride = static_cast<std::size_t>(std::max(1, c.save_interval));
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (s % stride != 0 && s + 1 != states.size()) continue;
    const auto& y = states[s];
    csv += format_double(s * c.dt) + "," + format_double(y.m().x) + "," +
           format_double(y.m().y) + "," + format_double(y.m().z);
    if (heavy)
      csv += "," + format_double(y.a().x) + "," + format_double(y.a().y) + "," +
             format_double(y.a().z);
    csv += "\n";
  }
  write_text(out_dir + "/states.csv", csv);

  ResidualReport rep = casimir_energy_report(states, L, noise.channels(), c.dt);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  nlohmann::json summary;
  summary["realization"] = to_string(c.realization);
  summary["steps"] = n;
  summary["seed"] = c.seed;
  summary["casimir_drifts"] = rep.params["casimir_drifts"];
  summary["max_casimir_drift"] = rep.max_residual;
  summary["energy_drift"] = rep.params["energy_excursion"];
  summary["noise_channels"] = noise.channels();
  summary["wall_time_s"] = wall;
  summary["ok"] = true;
  write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
  if (!quiet)
    std::cout << "[sgm] " << to_string(c.realization) << " run: max Casimir drift "
              << rep.max_residual << ", energy excursion "
              << rep.params["energy_excursion"].get<double>() << "\n";
  return summary;
}

nlohmann::json run_fluid(const ExperimentConfig& c, const std::string& out_dir, bool quiet) {
  auto t_start = std::chrono::steady_clock::now();
  Grid2D grid(c.nx, c.ny, c.Lx, c.Ly);
  NoiseModel noise = build_noise(c, &grid);
  Field omega0 = build_scalar_field(c.vorticity, grid, true);
  std::optional<Field> b0;
  if (c.buoyancy) b0 = build_scalar_field(*c.buoyancy, grid, false);
  MaterialLoop loop = MaterialLoop::circle(c.loop_cx, c.loop_cy, c.loop_radius, c.loop_n);

  const int n = static_cast<int>(std::round(c.T / c.dt));
  NoisePath path = sample_brownian(c.seed, c.dt, n, noise.channels());

  BudgetOptions opt;
  opt.salt.buoyancy_gravity = c.buoyancy_gravity;
  opt.salt.midpoint.tolerance = c.fixed_point_tol;
  opt.salt.cfl_limit = c.cfl_limit;
  if (c.save_interval > 0) {
    opt.observe_interval = c.save_interval;
    opt.observer = [&](int step, const Field& w, const Field* b) {
      char name[64];
      std::snprintf(name, sizeof(name), "/omega_%06d.sgmf", step);
      save_field(w, out_dir + name);
      if (b) {
        std::snprintf(name, sizeof(name), "/buoyancy_%06d.sgmf", step);
        save_field(*b, out_dir + name);
      }
    };
  }

  BudgetResult res = run_circulation_budget(omega0, b0, loop, noise, path, opt);

  save_field(res.omega, out_dir + "/omega_final.sgmf");
  if (res.buoyancy) save_field(*res.buoyancy, out_dir + "/buoyancy_final.sgmf");

  std::string csv = "t,I,cumulative_source\n";
  for (std::size_t k = 0; k < res.record.times.size(); ++k)
    csv += format_double(res.record.times[k]) + "," + format_double(res.record.I_values[k]) + "," +
           format_double(res.record.source_values[k]) + "\n";
  write_text(out_dir + "/circulation.csv", csv);

  double I0 = res.record.I_values.front();
  double IT = res.record.I_values.back();
  double maxI = 0;
  for (double v : res.record.I_values) maxI = std::max(maxI, std::abs(v));
  double kelvin_drift = std::abs(IT - I0) / std::max(std::abs(I0), 1e-30);
  double budget_residual =
      std::abs(IT - I0 - res.record.source_values.back()) / std::max(maxI, 1e-30);
  Spectral sp(grid);
  double mean_drift = std::abs(sp.mean(plane_of(res.omega, 0)));
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  nlohmann::json summary;
  summary["realization"] = "euler2d";
  summary["steps"] = n;
  summary["seed"] = c.seed;
  summary["I0"] = I0;
  summary["IT"] = IT;
  summary["kelvin_relative_drift"] = kelvin_drift;
  summary["cumulative_source"] = res.record.source_values.back();
  summary["budget_residual"] = budget_residual;
  summary["mean_vorticity_drift"] = mean_drift;
  summary["noise_channels"] = noise.channels();
  summary["wall_time_s"] = wall;
  bool conservative_case = !c.buoyancy.has_value();
  summary["kelvin_within_tolerance"] = !conservative_case || kelvin_drift < c.kelvin_drift_tol;
  summary["ok"] = true;
  write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
  if (!quiet)
    std::cout << "[sgm] euler2d run: I(0) " << I0 << " -> I(T) " << IT << " (rel drift "
              << kelvin_drift << ", budget residual " << budget_residual << ")\n";
  return summary;
}

}  // namespace

nlohmann::json run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                              bool quiet) {
  config.validate();
  fs::create_directories(out_dir);
  write_text(out_dir + "/config.json", to_json(config).dump(2) + "\n");
  if (config.realization == Realization::euler2d) return run_fluid(config, out_dir, quiet);
  return run_finite_dim(config, out_dir, quiet);
}

nlohmann::json run_ensemble(const ExperimentConfig& config, const std::string& out_dir,
                            int workers, bool quiet) {
  config.validate();
  fs::create_directories(out_dir);
  const int N = config.ensemble;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SGM_NUM_WORKERS"))
      workers = std::max(1, std::atoi(env));
  }
  workers = std::max(1, std::min(workers, N));

  std::vector<nlohmann::json> summaries(N);
  std::vector<std::string> errors(N);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= N) return;
      ExperimentConfig member = config;
      member.seed = config.seed + static_cast<std::uint64_t>(i);
      member.ensemble = 1;
      char dir[64];
      std::snprintf(dir, sizeof(dir), "/member_%03d", i);
      try {
        summaries[i] = run_experiment(member, out_dir + dir, true);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const bool fluid = config.realization == Realization::euler2d;
  std::string csv = fluid ? "member,seed,status,kelvin_relative_drift,budget_residual\n"
                          : "member,seed,status,max_casimir_drift,energy_drift\n";
  int failures = 0;
  for (int i = 0; i < N; ++i) {
    std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    if (!errors[i].empty()) {
      ++failures;
      csv += std::to_string(i) + "," + std::to_string(seed) + ",error,,\n";
      continue;
    }
    const auto& s = summaries[i];
    if (fluid)
      csv += std::to_string(i) + "," + std::to_string(seed) + ",ok," +
             format_double(s["kelvin_relative_drift"].get<double>()) + "," +
             format_double(s["budget_residual"].get<double>()) + "\n";
    else
      csv += std::to_string(i) + "," + std::to_string(seed) + ",ok," +
             format_double(s["max_casimir_drift"].get<double>()) + "," +
             format_double(s["energy_drift"].get<double>()) + "\n";
  }
  write_text(out_dir + "/aggregate.csv", csv);

  nlohmann::json out;
  out["members"] = N;
  out["failures"] = failures;
  nlohmann::json errlist = nlohmann::json::array();
  for (int i = 0; i < N; ++i)
    if (!errors[i].empty()) errlist.push_back({{"member", i}, {"error", errors[i]}});
  out["errors"] = errlist;
  write_text(out_dir + "/ensemble_summary.json", out.dump(2) + "\n");
  if (!quiet)
    std::cout << "[sgm] ensemble of " << N << " members, " << failures << " failures\n";
  return out;
}

// --- verification suites ---------------------------------------------------------

namespace {

ChainRuleFamily default_chainrule_family() {
  ChainRuleFamily fam;
  fam.S0.modes = {{1, 0, 0.8, 0.0}, {0, 1, 0.0, 0.6}, {1, 1, 0.3, -0.2}};
  fam.S1.modes = {{2, 1, 0.0, 0.5}, {1, 2, 0.4, 0.0}};
  fam.w.psi.modes = {{1, 1, 0.7, 0.0}, {2, 0, 0.0, 0.3}};
  fam.eps0 = 0.3;
  return fam;
}

KiwSpec kiw_spec(int flow_channels, int k_channels, FieldKind kind) {
  KiwSpec spec;
  spec.kind = kind;
  spec.K0.a0.modes = {{1, 0, 0.9, 0.0}, {1, 1, 0.0, 0.4}};
  spec.K0.a1.modes = {{0, 1, 0.5, 0.0}, {2, 1, 0.0, 0.2}};
  spec.G.a0.modes = {{0, 1, 0.0, 0.3}};
  spec.G.a1.modes = {{1, 0, 0.2, 0.0}};
  if (k_channels >= 1) {
    FourierOneForm h1;
    h1.a0.modes = {{1, 1, 0.25, 0.0}};
    h1.a1.modes = {{1, 0, 0.0, 0.2}};
    spec.H.push_back(h1);
  }
  if (k_channels >= 2) {
    FourierOneForm h2;
    h2.a0.modes = {{2, 0, 0.0, 0.2}};
    h2.a1.modes = {{0, 2, 0.15, 0.0}};
    spec.H.push_back(h2);
  }
  spec.u.psi.modes = {{1, 1, 0.4, 0.0}, {0, 2, 0.0, 0.25}};
  if (flow_channels >= 1) {
    StreamVelocity x1;
    x1.psi.modes = {{2, 1, 0.12, 0.0}};
    spec.xi.push_back(x1);
  }
  if (flow_channels >= 2) {
    StreamVelocity x2;
    x2.psi.modes = {{1, 2, 0.0, 0.1}};
    spec.xi.push_back(x2);
  }
  spec.T = 0.5;
  return spec;
}

int finish_reports(const std::vector<ResidualReport>& reports, const VerifyOptions& opt) {
  nlohmann::json doc = nlohmann::json::array();
  bool all_pass = true;
  bool any_inconclusive = false;
  for (const auto& r : reports) {
    doc.push_back(r.to_json());
    all_pass = all_pass && r.pass;
    any_inconclusive = any_inconclusive || r.inconclusive;
    if (!opt.quiet) {
      std::cout << "[" << (r.pass ? "PASS" : (r.inconclusive ? "INCONCLUSIVE" : "FAIL")) << "] "
                << r.name;
      if (!r.resolutions.empty() && r.resolutions.size() > 1)
        std::cout << " order " << r.fitted_order << " (R^2 " << r.r_squared << ")";
      std::cout << " max residual " << r.max_residual << "\n";
    }
  }
  if (!opt.out_path.empty()) write_text(opt.out_path, doc.dump(2) + "\n");
  return all_pass && !any_inconclusive ? 0 : 1;
}

}  // namespace

int run_verify_suite(const std::string& suite, const VerifyOptions& opt) {
  std::vector<ResidualReport> reports;
  if (suite == "duality") {
    reports.push_back(check_dualities(Realization::rigid_body, 1000, opt.seed));
    reports.push_back(check_dualities(Realization::heavy_top, 1000, opt.seed + 1));
    reports.push_back(check_dualities_grid(Grid2D(32, 32, 2 * M_PI, 2 * M_PI), 50, opt.seed + 2));
  } else if (suite == "chainrule") {
    reports.push_back(check_lie_chain_rule(default_chainrule_family(),
                                           Grid2D(64, 64, 2 * M_PI, 2 * M_PI),
                                           {0.1, 0.05, 0.025}));
  } else if (suite == "kiw") {
    std::vector<double> dts = opt.dt_list.empty() ? std::vector<double>{4e-3, 2e-3, 1e-3}
                                                  : opt.dt_list;
    Grid2D grid(32, 32, 2 * M_PI, 2 * M_PI);
    reports.push_back(check_kiw(kiw_spec(1, 1, FieldKind::scalar), grid, dts, opt.seed, 0.9));
    reports.push_back(check_kiw(kiw_spec(2, 2, FieldKind::scalar), grid, dts, opt.seed + 1, 0.5));
  } else if (suite == "variation") {
    reports.push_back(check_variation_lemma(VariationSpec{}, 1e-4, {1e-2, 5e-3, 2.5e-3},
                                            {4e-4, 2e-4, 1e-4}, opt.seed));
  } else if (suite == "casimir") {
    {
      LagrangianModel L = LagrangianModel::rigid_body({1.0, 2.0, 3.0});
      NoiseModel noise;
      noise.realization = Realization::rigid_body;
      noise.xis = {{0.0, 0.0, 1.0}};
      NoisePath path = sample_brownian(opt.seed, 1e-3, 10000, 1);
      auto states = lie_poisson_trajectory(DualElement::rigid({0.6, 0.4, 1.2}), L, noise, path);
      reports.push_back(casimir_energy_report(states, L, 1, 1e-3));
      reports.back().name = "casimir_rigid_body";
    }
    {
      LagrangianModel L = LagrangianModel::heavy_top({1.0, 1.4, 2.2}, 1.0, {0, 0, 1});
      NoiseModel noise;
      noise.realization = Realization::heavy_top;
      noise.xis = {{0.0, 0.0, 0.3}};
      NoisePath path = sample_brownian(opt.seed + 1, 1e-3, 10000, 1);
      auto states = lie_poisson_trajectory(DualElement::heavy({0.5, -0.3, 0.8}, {0.1, 0.2, 0.97}),
                                           L, noise, path);
      reports.push_back(casimir_energy_report(states, L, 1, 1e-3));
      reports.back().name = "casimir_heavy_top";
    }
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown verification suite '" + suite + "'");
  }
  return finish_reports(reports, opt);
}

void run_eof_extraction(const std::string& input_dir, int K, const std::string& out_dir) {
  auto fields = load_snapshot_dir(input_dir);
  if (fields.size() < 2)
    throw Error(ErrorCode::invalid_argument,
                "EOF extraction needs at least 2 snapshots in " + input_dir);
  SnapshotEnsemble ens;
  ens.grid = fields[0].grid();
  ens.source_label = input_dir;
  for (auto& f : fields) {
    require_kind(f, FieldKind::vector, "snapshots must be vector fields");
    ens.snapshots.push_back(std::move(f));
  }
  EOFResult eof = compute_eof(ens, K);
  fs::create_directories(out_dir);
  for (int k = 0; k < K; ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "/mode_%03d.sgmf", k);
    save_field(eof.modes[k], out_dir + name);
  }
  save_field(eof.mean_field, out_dir + "/mean.sgmf");
  std::string csv = "mode,singular_value\n";
  for (int k = 0; k < K; ++k)
    csv += std::to_string(k) + "," + format_double(eof.singular_values[k]) + "\n";
  write_text(out_dir + "/singular_values.csv", csv);
}

}  // namespace sgm
