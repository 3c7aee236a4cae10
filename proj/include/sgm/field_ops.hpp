#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sgm/grid.hpp"
#include "sgm/spectral.hpp"

namespace sgm {

// Component planes of a multi-component field.
std::vector<double> plane_of(const Field& f, int c);
void set_plane(Field& f, int c, const std::vector<double>& plane);

/// Lie derivative of T along u, by tensor kind:
///   scalar   : u . grad f
///   density  : div(f u)
///   one_form : (L_u a)_j = u^k d_k a_j + a_k d_j u^k
///   vector   : [u, w] = u . grad w - w . grad u
Field lie_derivative(const VectorField& u, const Field& T);

/// Stream-function inversion on the torus: solves lap(psi) = -w and returns
/// u = (d_y psi, -d_x psi), so that curl u = d_x u_y - d_y u_x = w.
VectorField velocity_from_vorticity(const Field& omega, double mean_tol = 1e-10);

Field curl(const VectorField& u);        // scalar d_x u_y - d_y u_x
Field divergence(const VectorField& u);  // scalar
VectorField gradient(const Field& f);    // one_form components as a vector pair

/// Bicubic (4-point Lagrange per axis) interpolation; exact for polynomials
/// of degree <= 3 per axis over one cell. Points are wrapped into the torus.
std::vector<double> interpolate(const Field& T, const std::vector<std::pair<double, double>>& pts);
void interpolate_at(const Field& T, double x, double y, double* out);

double integrate_domain(const Field& T);

/// Musical isomorphisms under the flat torus metric (identity on components).
Field flat(const VectorField& u);
VectorField sharp(const Field& one_form);

/// L2 pairing by cell-area-weighted quadrature: sum_ij a.b dA.
double quadrature_pair(const Field& a, const Field& b);

double max_abs(const Field& f);
double l2_norm(const Field& f);
Field axpy(double alpha, const Field& x, const Field& y);  // alpha*x + y

/// Euler-Poincare momentum source for a scalar advected quantity:
/// the one-form a * grad(v) with v = dl/da. `v` may be given as a scalar
/// field (periodic potential) or directly as its gradient one-form, for
/// potentials that are linear in the coordinates and so not periodic.
Field ep_momentum_source(const Field& dl_da, const Field& a);

Field taylor_green_vorticity(const Grid2D& grid, double amplitude = 1.0);

/// Seeded band-limited random fields (modes with |k| <= kmax, k=0 excluded).
Field random_band_limited_scalar(const Grid2D& grid, int kmax, std::uint64_t seed);
VectorField random_divfree_velocity(const Grid2D& grid, int kmax, std::uint64_t seed);

}  // namespace sgm
