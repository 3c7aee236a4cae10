// sgm: seeded stochastic geometric mechanics experiments from the command line.
//
// Subcommands:
//   run       one experiment from a JSON config (or a named preset)
//   ensemble  N members with seeds base+i, optionally in parallel
//   verify    structural verification suites with JSON reports
//   eof       empirical orthogonal functions from SGMF snapshots
//
// Exit codes: 0 success, 1 verification fail/inconclusive, 2 usage/config
// error, 3 numerical failure.

#include <CLI11.hpp>

#include <iostream>

#include "sgm/runner.hpp"

namespace {

int exit_code_for(const sgm::Error& e) {
  switch (e.code()) {
    case sgm::ErrorCode::fixed_point_diverged:
    case sgm::ErrorCode::cfl_violation:
    case sgm::ErrorCode::nonzero_mean:
    case sgm::ErrorCode::nonpositive_density:
      return 3;
    default:
      return 2;
  }
}

sgm::ExperimentConfig resolve_config(const std::string& config_path, const std::string& preset) {
  if (!config_path.empty()) return sgm::load_config(config_path);
  if (!preset.empty()) return sgm::preset_config(preset);
  throw sgm::Error(sgm::ErrorCode::invalid_argument, "provide --config or --preset");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgm: stochastic geometric mechanics toolkit"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir, out_json, suite, eof_input;
  std::uint64_t seed = 0;
  bool has_seed = false, quiet = false;
  int workers = 0, eof_k = 3;
  std::vector<double> dt_list;

  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--config", config_path, "JSON config path");
  run->add_option("--preset", preset, "named preset (rigid_body, heavy_top, euler2d_kelvin, boussinesq_budget)");
  run->add_option("--seed", seed, "seed override")->each([&](const std::string&) { has_seed = true; });
  run->add_option("--out", out_dir, "output directory override");

  auto* ens = app.add_subcommand("ensemble", "run an ensemble of experiments");
  ens->add_option("--config", config_path, "JSON config path");
  ens->add_option("--preset", preset, "named preset");
  ens->add_option("--seed", seed, "base seed override")->each([&](const std::string&) { has_seed = true; });
  ens->add_option("--out", out_dir, "output directory override");
  ens->add_option("--members", workers, "")->group("");  // reserved
  ens->add_option("--workers", workers, "worker threads (default: SGM_NUM_WORKERS or hardware)");

  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "one of: chainrule, kiw, variation, duality, casimir")->required();
  ver->add_option("--seed", seed, "suite seed")->each([&](const std::string&) { has_seed = true; });
  ver->add_option("--out", out_json, "JSON report path");
  ver->add_option("--dt-list", dt_list, "dt ladder override (descending, dyadic)");

  auto* eof = app.add_subcommand("eof", "extract EOF modes from SGMF snapshots");
  eof->add_option("input", eof_input, "directory of SGMF snapshot files")->required();
  eof->add_option("-k,--modes", eof_k, "number of modes to keep")->required();
  eof->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      sgm::ExperimentConfig cfg = resolve_config(config_path, preset);
      if (has_seed) cfg.seed = seed;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      sgm::run_experiment(cfg, cfg.out_dir, quiet);
      return 0;
    }
    if (app.got_subcommand(ens)) {
      sgm::ExperimentConfig cfg = resolve_config(config_path, preset);
      if (has_seed) cfg.seed = seed;
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      auto summary = sgm::run_ensemble(cfg, cfg.out_dir, workers, quiet);
      return summary["failures"].get<int>() == 0 ? 0 : 3;
    }
    if (app.got_subcommand(ver)) {
      sgm::VerifyOptions opt;
      if (has_seed) opt.seed = seed;
      opt.out_path = out_json;
      opt.dt_list = dt_list;
      opt.quiet = quiet;
      return sgm::run_verify_suite(suite, opt);
    }
    if (app.got_subcommand(eof)) {
      sgm::run_eof_extraction(eof_input, eof_k, out_dir);
      return 0;
    }
  } catch (const sgm::Error& e) {
    std::cerr << "sgm: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "sgm: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
