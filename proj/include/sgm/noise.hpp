#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sgm/algebra.hpp"

namespace sgm {

/// Deterministic standard-normal stream: mt19937_64 + hand-rolled Box-Muller,
/// so the draw sequence is identical on every conforming platform.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : mt_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return (mt_() >> 11) * (1.0 / 9007199254740992.0); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

 private:
  std::mt19937_64 mt_;
  bool have_spare_ = false;
  double spare_ = 0;
};

/// Brownian increments: n_steps x channels, each N(0, dt), reproducible
/// bit-exactly from (seed, dt, n_steps, channels).
struct NoisePath {
  std::uint64_t seed = 0;
  double dt = 0;
  int n_steps = 0;
  int channels = 0;
  int level = 0;  // dyadic refinement depth relative to the sampled path
  std::vector<double> increments;  // [step * channels + ch]

  double increment(int step, int ch) const {
    return increments[static_cast<std::size_t>(step) * channels + ch];
  }

  /// Brownian value W(t_step) accumulated from 0.
  double brownian(int step, int ch) const;

  /// Halves dt via a Brownian bridge. Each coarse increment equals the sum of
  /// its two fine halves exactly (the second half is defined by subtraction).
  NoisePath refined() const;

  /// Doubles dt by pairwise summation; requires even n_steps.
  NoisePath coarsened() const;
};

NoisePath sample_brownian(std::uint64_t seed, double dt, int n_steps, int channels);

/// Prescribed data vector fields modulating the noise channels. Finite-dim
/// realizations carry constant so(3) vectors; the fluid realization carries
/// divergence-free grid fields. M = 0 is the deterministic limit.
struct NoiseModel {
  Realization realization = Realization::rigid_body;
  std::vector<Vec3> xis;               // finite-dim channels
  std::vector<VectorField> xi_fields;  // fluid channels
  std::vector<std::string> labels;

  int channels() const {
    return realization == Realization::euler2d ? static_cast<int>(xi_fields.size())
                                               : static_cast<int>(xis.size());
  }
  void validate() const;
};

/// One evaluated stochastic transport increment dchi = u dt + sum xi_i dW_i.
struct StochIncrement {
  Realization realization = Realization::euler2d;
  const VectorField* drift_field = nullptr;  // may be null (no drift)
  double dt = 0;
  const NoiseModel* noise = nullptr;         // may be null (deterministic)
  std::vector<double> dW;                    // one entry per channel

  /// dchi evaluated at a point, as a displacement over the step.
  void displacement_at(double x, double y, double* out) const;
};

}  // namespace sgm
