#include "sgm/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace sgm {

struct Spectral::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  int nx = 0, ny = 0;

  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

namespace {

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, std::unique_ptr<Spectral::Plans>> g_plan_cache;

const Spectral::Plans* plans_for(int nx, int ny) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(nx, ny);
  auto it = g_plan_cache.find(key);
  if (it != g_plan_cache.end()) return it->second.get();

  auto p = std::make_unique<Spectral::Plans>();
  p->nx = nx;
  p->ny = ny;
  std::vector<double> real(static_cast<std::size_t>(nx) * ny);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(ny) * (nx / 2 + 1));
  // FFTW row-major dims: (ny, nx) with x contiguous. FFTW_UNALIGNED so plans
  // work with plain std::vector buffers via the new-array interface.
  p->fwd = fftw_plan_dft_r2c_2d(ny, nx, real.data(),
                                reinterpret_cast<fftw_complex*>(spec.data()),
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  p->bwd = fftw_plan_dft_c2r_2d(ny, nx, reinterpret_cast<fftw_complex*>(spec.data()),
                                real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  auto* raw = p.get();
  g_plan_cache.emplace(key, std::move(p));
  return raw;
}

}  // namespace

Spectral::Spectral(const Grid2D& grid) : grid_(grid), plans_(plans_for(grid.nx, grid.ny)) {}

std::vector<Spectral::Cplx> Spectral::forward(const std::vector<double>& plane) const {
  if (plane.size() != grid_.nodes())
    throw Error(ErrorCode::invalid_argument, "plane size does not match grid");
  std::vector<double> in(plane);
  std::vector<Cplx> out(static_cast<std::size_t>(grid_.ny) * (grid_.nx / 2 + 1));
  fftw_execute_dft_r2c(plans_->fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  double scale = 1.0 / (static_cast<double>(grid_.nx) * grid_.ny);
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> Spectral::backward(const std::vector<Cplx>& spec) const {
  std::vector<Cplx> in(spec);  // c2r destroys its input
  std::vector<double> out(grid_.nodes());
  fftw_execute_dft_c2r(plans_->bwd, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

double Spectral::kx(int i) const { return 2.0 * M_PI / grid_.Lx * i; }

double Spectral::ky(int j) const {
  int f = (j <= grid_.ny / 2) ? j : j - grid_.ny;
  return 2.0 * M_PI / grid_.Ly * f;
}

std::vector<double> Spectral::deriv_x(const std::vector<double>& plane) const {
  auto s = forward(plane);
  const int nkx = grid_.nx / 2 + 1;
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < nkx; ++i) {
      Cplx& c = s[static_cast<std::size_t>(j) * nkx + i];
      // Nyquist column has no well-defined sign; its derivative is set to zero.
      double k = (i == grid_.nx / 2) ? 0.0 : kx(i);
      c = Cplx(0, k) * c;
    }
  return backward(s);
}

std::vector<double> Spectral::deriv_y(const std::vector<double>& plane) const {
  auto s = forward(plane);
  const int nkx = grid_.nx / 2 + 1;
  for (int j = 0; j < grid_.ny; ++j) {
    double k = (j == grid_.ny / 2) ? 0.0 : ky(j);
    for (int i = 0; i < nkx; ++i) {
      Cplx& c = s[static_cast<std::size_t>(j) * nkx + i];
      c = Cplx(0, k) * c;
    }
  }
  return backward(s);
}

std::vector<double> Spectral::inverse_laplacian_neg(const std::vector<double>& w) const {
  auto s = forward(w);
  const int nkx = grid_.nx / 2 + 1;
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < nkx; ++i) {
      double k2 = kx(i) * kx(i) + ky(j) * ky(j);
      Cplx& c = s[static_cast<std::size_t>(j) * nkx + i];
      c = (k2 == 0.0) ? Cplx(0, 0) : c / k2;
    }
  return backward(s);
}

std::vector<double> Spectral::shift(const std::vector<double>& plane, double sx, double sy) const {
  auto s = forward(plane);
  const int nkx = grid_.nx / 2 + 1;
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < nkx; ++i) {
      double phase = -(kx(i) * sx + ky(j) * sy);
      s[static_cast<std::size_t>(j) * nkx + i] *= Cplx(std::cos(phase), std::sin(phase));
    }
  return backward(s);
}

void Spectral::truncate_modes(std::vector<double>& plane, double frac) const {
  auto s = forward(plane);
  const int nkx = grid_.nx / 2 + 1;
  const int cut_x = static_cast<int>(grid_.nx * frac);
  const int cut_y = static_cast<int>(grid_.ny * frac);
  for (int j = 0; j < grid_.ny; ++j) {
    int fy = (j <= grid_.ny / 2) ? j : grid_.ny - j;
    for (int i = 0; i < nkx; ++i)
      if (i > cut_x || fy > cut_y) s[static_cast<std::size_t>(j) * nkx + i] = Cplx(0, 0);
  }
  plane = backward(s);
}

double Spectral::mean(const std::vector<double>& plane) const {
  double sum = 0;
  for (double v : plane) sum += v;
  return sum / plane.size();
}

void Spectral::subtract_mean(std::vector<double>& plane) const {
  double m = mean(plane);
  for (double& v : plane) v -= m;
}

}  // namespace sgm
