#pragma once

#include <complex>
#include <vector>

#include "sgm/grid.hpp"

namespace sgm {

/// Pseudo-spectral operators on one grid. FFT plans are cached per grid size;
/// all entry points are safe to call from multiple threads.
class Spectral {
 public:
  using Cplx = std::complex<double>;

  explicit Spectral(const Grid2D& grid);

  const Grid2D& grid() const { return grid_; }

  /// Real plane (nx*ny, y-outer) -> half spectrum (ny x (nx/2+1)),
  /// normalized so that round-tripping is the identity.
  std::vector<Cplx> forward(const std::vector<double>& plane) const;
  std::vector<double> backward(const std::vector<Cplx>& spec) const;

  double kx(int i) const;  // wavenumber of spectral column i in [0, nx/2]
  double ky(int j) const;  // signed wavenumber of spectral row j

  std::vector<double> deriv_x(const std::vector<double>& plane) const;
  std::vector<double> deriv_y(const std::vector<double>& plane) const;

  /// Solves laplacian(psi) = -w for mean-zero w; the k=0 mode of psi is 0.
  std::vector<double> inverse_laplacian_neg(const std::vector<double>& w) const;

  /// Periodic shift: f(x) -> f(x - s). Exact for band-limited fields.
  std::vector<double> shift(const std::vector<double>& plane, double sx, double sy) const;

  /// Zeroes every mode with |kx index| > nx*frac or |ky index| > ny*frac.
  void truncate_modes(std::vector<double>& plane, double frac = 1.0 / 3.0) const;

  double mean(const std::vector<double>& plane) const;
  void subtract_mean(std::vector<double>& plane) const;

  struct Plans;  // FFTW plan pair, owned by the process-wide cache

 private:
  Grid2D grid_;
  const Plans* plans_;
};

}  // namespace sgm
