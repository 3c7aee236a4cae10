#pragma once

#include <json.hpp>

#include "sgm/analytic.hpp"
#include "sgm/dynamics.hpp"

namespace sgm {

/// Residual table over a resolution ladder with a least-squares order fit.
/// A fit with R^2 < 0.9 is flagged inconclusive rather than pass/fail.
struct ResidualReport {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  std::vector<double> resolutions;
  std::vector<double> residuals;
  double fitted_order = 0;
  double r_squared = 0;
  double max_residual = 0;
  bool pass = false;
  bool inconclusive = false;
  std::string note;

  nlohmann::json to_json() const;

  /// Fits the order and applies `min_order` under the R^2 >= 0.9 rule.
  void fit_and_judge(double min_order);
};

/// Least-squares slope of log(residual) against log(resolution).
double fit_order(const std::vector<double>& h, const std::vector<double>& r, double* r_squared);

// --- deterministic Lie chain rule ---------------------------------------------

/// Families: S_eps = S0 + eps S1 (so dS/deps = S1 exactly) pushed forward by
/// g_eps = time-eps flow of the velocity w.
struct ChainRuleFamily {
  FourierScalar S0, S1;
  StreamVelocity w;
  double eps0 = 0.3;
};

/// Central-difference d/deps of g_eps* S_eps against g_eps*(S1 - L_w S_eps);
/// the residual is second order in the difference step.
ResidualReport check_lie_chain_rule(const ChainRuleFamily& fam, const Grid2D& grid,
                                    const std::vector<double>& h_list);

// --- Kunita-Ito-Wentzell formula ------------------------------------------------

/// K_t = K0 + G t + sum_i H_i B^i_t carried by the stochastic flow of
/// dchi = u dt + sum_i xi_i o dW^i. Scalar specs use the first component only.
struct KiwSpec {
  FieldKind kind = FieldKind::scalar;
  FourierOneForm K0, G;
  std::vector<FourierOneForm> H;
  StreamVelocity u;
  std::vector<StreamVelocity> xi;
  double T = 0.5;
};

/// Pathwise comparison of the increments of g_t^* K_t against the pulled-back
/// right-hand side, accumulated with the same dyadically refined increments.
/// dt_list must descend by factors of two.
ResidualReport check_kiw(const KiwSpec& spec, const Grid2D& grid,
                         const std::vector<double>& dt_list, std::uint64_t seed,
                         double min_order);

// --- variational lemma ----------------------------------------------------------

/// Two-parameter so(3) family g_{t,eps} = exp(eps c(t)^) g_t with the
/// stochastic t-flow dg g^-1 = u dt + sum xi_i o dW; v(t) = c(t) exactly.
struct VariationSpec {
  Vec3 u{0.9, 0.0, 0.4};
  std::vector<Vec3> xi{{0.0, 0.05, 0.0}};
  Vec3 c0{0.8, -0.3, 0.5}, c1{0.2, 0.4, -0.3}, c2{-0.5, 0.7, 0.9};  // c(t) = c0 + t c1 + sin(t) c2
  double T = 0.5;
};

/// Compares the central eps-difference of the measured increments of
/// dg g^-1 with dv + [dchi, v] pathwise. Residual order 2 in eps; the
/// secondary dt ladder (same path, dyadic) must show decreasing residuals.
ResidualReport check_variation_lemma(const VariationSpec& spec, double dt,
                                     const std::vector<double>& eps_list,
                                     const std::vector<double>& dt_list, std::uint64_t seed);

// --- defining dualities ----------------------------------------------------------

struct DualityThresholds {
  double finite_dim = 1e-10;   // absolute
  double grid_relative = 1e-6;
};

/// Max residual of the ad/ad*, diamond and Ad/Ad* defining identities over
/// seeded random tuples. Exceeding the threshold yields a failing report,
/// not an exception.
ResidualReport check_dualities(Realization realization, int n_samples, std::uint64_t seed,
                               const DualityThresholds& thr = {});

/// Grid variant (32^2 band-limited tuples, translation group elements).
ResidualReport check_dualities_grid(const Grid2D& grid, int n_samples, std::uint64_t seed,
                                    const DualityThresholds& thr = {});

// --- Casimir / energy report ------------------------------------------------------

/// Time series of each Casimir and of the Hamiltonian along a stored
/// trajectory. Asserts Casimir drift <= drift_tol, and for noisy runs an
/// energy excursion exceeding 100x the Casimir drift.
ResidualReport casimir_energy_report(const std::vector<DualElement>& states,
                                     const LagrangianModel& L, int noise_channels,
                                     double dt, double drift_tol = 1e-8);

}  // namespace sgm
