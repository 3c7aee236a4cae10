#pragma once

#include <string>
#include <vector>

#include "sgm/grid.hpp"

namespace sgm {

struct SnapshotEnsemble {
  Grid2D grid;
  std::vector<VectorField> snapshots;
  std::string source_label;
  std::vector<double> times;

  void validate() const;
};

/// Empirical orthogonal functions of the velocity fluctuations. Modes are
/// orthonormal under the cell-area-weighted quadrature inner product and the
/// leading nonzero component of each mode is made positive, so the
/// decomposition is fully deterministic.
struct EOFResult {
  std::vector<VectorField> modes;
  std::vector<double> singular_values;  // nonincreasing, >= 0
  VectorField mean_field;
};

EOFResult compute_eof(const SnapshotEnsemble& ens, int K);

}  // namespace sgm
