#pragma once

#include <json.hpp>

#include "sgm/config.hpp"

namespace sgm {

/// Executes one experiment and writes its artifacts under out_dir:
/// states CSV / SGMF snapshots, circulation CSV and summary.json.
/// Returns the summary document.
nlohmann::json run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                              bool quiet = false);

/// Runs config.ensemble members with seeds base_seed + i, each into
/// out_dir/member_XXX, and writes aggregate.csv. Member artifacts are
/// byte-identical for any worker count. `workers` <= 0 picks automatically
/// (capped by the SGM_NUM_WORKERS environment variable).
nlohmann::json run_ensemble(const ExperimentConfig& config, const std::string& out_dir,
                            int workers = 0, bool quiet = false);

struct VerifyOptions {
  std::uint64_t seed = 2024;
  std::vector<double> dt_list;  // optional override for the kiw ladder
  std::string out_path;         // JSON report destination ("" = stdout only)
  bool quiet = false;
};

/// Runs one verification suite {chainrule, kiw, variation, duality, casimir}.
/// Exit-code semantics: 0 all pass, 1 any failure or inconclusive fit.
int run_verify_suite(const std::string& suite, const VerifyOptions& opt);

/// EOF extraction: reads >= 2 SGMF snapshots from input_dir, writes K mode
/// files and singular_values.csv into out_dir.
void run_eof_extraction(const std::string& input_dir, int K, const std::string& out_dir);

/// Doubles written with 17 significant digits (round-trip safe).
std::string format_double(double v);

}  // namespace sgm
