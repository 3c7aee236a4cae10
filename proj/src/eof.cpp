#include "sgm/eof.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

namespace sgm {

void SnapshotEnsemble::validate() const {
  if (snapshots.size() < 2)
    throw Error(ErrorCode::invalid_argument, "an ensemble needs at least 2 snapshots");
  for (const auto& s : snapshots) {
    if (s.grid() != grid) throw Error(ErrorCode::grid_mismatch, "snapshot on a different grid");
    require_kind(s, FieldKind::vector, "snapshots must be vector fields");
    for (double v : s.data())
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "snapshot has non-finite values");
  }
}

EOFResult compute_eof(const SnapshotEnsemble& ens, int K) {
  ens.validate();
  const int n_snap = static_cast<int>(ens.snapshots.size());
  const std::size_t dof = ens.grid.nodes() * 2;
  if (K < 1 || K > std::min<std::size_t>(n_snap - 1, dof))
    throw Error(ErrorCode::invalid_argument,
                "K must satisfy 1 <= K <= min(n_snapshots - 1, dof)");

  VectorField mean(ens.grid, FieldKind::vector);
  for (const auto& s : ens.snapshots)
    for (std::size_t n = 0; n < dof; ++n) mean.data()[n] += s.data()[n];
  for (double& v : mean.data()) v /= n_snap;

  // Quadrature inner product <u,v> = dA * sum(u.v): scale by sqrt(dA) so the
  // Euclidean SVD computes the weighted decomposition.
  const double w = std::sqrt(ens.grid.cell_area());
  Eigen::MatrixXd F(dof, n_snap);
  for (int s = 0; s < n_snap; ++s)
    for (std::size_t n = 0; n < dof; ++n)
      F(static_cast<Eigen::Index>(n), s) = w * (ens.snapshots[s].data()[n] - mean.data()[n]);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(F, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const auto& U = svd.matrixU();

  EOFResult out;
  out.mean_field = mean;
  for (int k = 0; k < K; ++k) {
    out.singular_values.push_back(sv(k));
    VectorField mode(ens.grid, FieldKind::vector);
    for (std::size_t n = 0; n < dof; ++n) mode.data()[n] = U(static_cast<Eigen::Index>(n), k) / w;
    // Sign convention: the first component above noise level is positive.
    double scale = 0;
    for (double v : mode.data()) scale = std::max(scale, std::abs(v));
    for (double v : mode.data()) {
      if (std::abs(v) > 1e-12 * scale) {
        if (v < 0)
          for (double& z : mode.data()) z = -z;
        break;
      }
    }
    out.modes.push_back(std::move(mode));
  }
  return out;
}

}  // namespace sgm
