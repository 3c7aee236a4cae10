#pragma once

#include "sgm/dynamics.hpp"

namespace sgm {

/// Discrete flow map on the torus: node X of the lattice is carried to g(X).
/// Positions are stored unwrapped so the displacement g(X) - X stays a smooth
/// periodic function of X and can be differentiated spectrally.
class FlowMap2D {
 public:
  explicit FlowMap2D(const Grid2D& grid);

  const Grid2D& grid() const { return grid_; }
  double x(int i, int j) const { return px_.at(i, j); }
  double y(int i, int j) const { return py_.at(i, j); }

  /// Advance every node by one midpoint update of dx = u dt + Xi.
  void advance(const VectorField* drift, double dt, const VectorField* noise_disp,
               const MidpointOptions& opt = {});

  /// Pull-back of a scalar: (g^* f)(X) = f(g(X)).
  Field pullback_scalar(const Field& f) const;

  /// Pull-back of a one-form: (g^* a)_j(X) = a_k(g(X)) dg^k/dX_j.
  Field pullback_one_form(const Field& alpha) const;

  /// Jacobian entries dg^k/dX_j on the lattice, spectrally differentiated.
  void jacobian(Field& dgx_dx, Field& dgx_dy, Field& dgy_dx, Field& dgy_dy) const;

 private:
  Grid2D grid_;
  Field px_, py_;  // scalar planes of node positions
};

}  // namespace sgm
