#include "sgm/noise.hpp"

#include <cmath>

namespace sgm {

double NoisePath::brownian(int step, int ch) const {
  double w = 0;
  for (int s = 0; s < step; ++s) w += increment(s, ch);
  return w;
}

NoisePath sample_brownian(std::uint64_t seed, double dt, int n_steps, int channels) {
  if (!(dt > 0) || n_steps < 1 || channels < 0)
    throw Error(ErrorCode::invalid_argument, "sample_brownian requires dt > 0, n_steps >= 1, M >= 0");
  NoisePath p;
  p.seed = seed;
  p.dt = dt;
  p.n_steps = n_steps;
  p.channels = channels;
  p.increments.resize(static_cast<std::size_t>(n_steps) * channels);
  GaussianRng rng(seed);
  double s = std::sqrt(dt);
  for (auto& v : p.increments) v = s * rng.normal();
  return p;
}

NoisePath NoisePath::refined() const {
  NoisePath f;
  f.seed = seed;
  f.dt = dt / 2.0;
  f.n_steps = n_steps * 2;
  f.channels = channels;
  f.level = level + 1;
  f.increments.resize(increments.size() * 2);
  // Bridge RNG is derived from (seed, level) so refinement is reproducible.
  GaussianRng rng(seed * 0x9e3779b97f4a7c15ULL + 0xd1b54a32d192ed03ULL * (level + 1));
  double half_sd = std::sqrt(dt / 4.0);
  for (int s = 0; s < n_steps; ++s)
    for (int c = 0; c < channels; ++c) {
      double w = increment(s, c);
      double first = 0.5 * w + half_sd * rng.normal();
      double second = w - first;
      // nudge the second half so the pair sums back to w bit-exactly
      for (int k = 0; k < 4 && first + second != w; ++k) second += w - (first + second);
      f.increments[(static_cast<std::size_t>(2 * s) * channels) + c] = first;
      f.increments[(static_cast<std::size_t>(2 * s + 1) * channels) + c] = second;
    }
  return f;
}

NoisePath NoisePath::coarsened() const {
  if (n_steps % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "coarsening needs an even number of steps");
  NoisePath c;
  c.seed = seed;
  c.dt = dt * 2.0;
  c.n_steps = n_steps / 2;
  c.channels = channels;
  c.level = level - 1;
  c.increments.resize(increments.size() / 2);
  for (int s = 0; s < c.n_steps; ++s)
    for (int ch = 0; ch < channels; ++ch)
      c.increments[static_cast<std::size_t>(s) * channels + ch] =
          increment(2 * s, ch) + increment(2 * s + 1, ch);
  return c;
}

void NoiseModel::validate() const {
  if (realization == Realization::euler2d) {
    if (!xis.empty())
      throw Error(ErrorCode::realization_mismatch, "fluid noise must use grid fields");
    for (std::size_t i = 1; i < xi_fields.size(); ++i)
      require_same_grid(xi_fields[0], xi_fields[i]);
    for (const auto& f : xi_fields)
      require_kind(f, FieldKind::vector, "noise field must be a vector field");
  } else if (!xi_fields.empty()) {
    throw Error(ErrorCode::realization_mismatch, "finite-dim noise must use constant vectors");
  }
}

void StochIncrement::displacement_at(double x, double y, double* out) const {
  out[0] = 0;
  out[1] = 0;
  double val[2];
  if (drift_field) {
    interpolate_at(*drift_field, x, y, val);
    out[0] += val[0] * dt;
    out[1] += val[1] * dt;
  }
  if (noise) {
    for (std::size_t i = 0; i < dW.size(); ++i) {
      interpolate_at(noise->xi_fields[i], x, y, val);
      out[0] += val[0] * dW[i];
      out[1] += val[1] * dW[i];
    }
  }
}

}  // namespace sgm
