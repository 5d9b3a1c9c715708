#include "fdte/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "fdte/errors.hpp"

namespace fdte {

namespace {

// The FFTW planner is not thread safe; executes on distinct plans are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Dft::Dft(int n) : n_(n) {
  in_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n));
  out_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n));
  if (!in_ || !out_) throw NumericalError("Dft: allocation failed");
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in_),
                               reinterpret_cast<fftw_complex*>(out_),
                               FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in_),
                               reinterpret_cast<fftw_complex*>(out_),
                               FFTW_BACKWARD, FFTW_ESTIMATE);
}

Dft::~Dft() {
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

void Dft::execute_forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }
void Dft::execute_backward() { fftw_execute(static_cast<fftw_plan>(plan_bwd_)); }

namespace {

// e^{i xi_k x_min}. For a symmetric window x_min = -L/2 this is (-1)^k
// exactly; detect that case and avoid accumulating trig error.
struct BoundaryPhase {
  bool alternating;
  const Grid* grid;

  explicit BoundaryPhase(const Grid& g) : grid(&g) {
    alternating = std::abs(g.x_min + 0.5 * g.length()) <
                  1e-14 * g.length();
  }

  std::complex<double> operator()(int k) const {
    if (alternating) return (k & 1) ? -1.0 : 1.0;
    const double ph = grid->xi(k) * grid->x_min;
    return {std::cos(ph), std::sin(ph)};
  }
};

}  // namespace

SpectralField forward_transform(const Grid& grid, std::span<const double> f) {
  if (static_cast<int>(f.size()) != grid.n) {
    throw DomainError("forward_transform: size mismatch");
  }
  Dft dft(grid.n);
  for (int j = 0; j < grid.n; ++j) dft.in()[j] = f[j];
  dft.execute_backward();
  const BoundaryPhase phase(grid);
  SpectralField field{grid, std::vector<std::complex<double>>(grid.n)};
  const double dx = grid.dx();
  for (int k = 0; k < grid.n; ++k) {
    field.coeff[k] = dx * phase(k) * dft.out()[k];
  }
  return field;
}

std::vector<std::complex<double>> inverse_transform(
    const Grid& grid, std::span<const std::complex<double>> coeff) {
  if (static_cast<int>(coeff.size()) != grid.n) {
    throw DomainError("inverse_transform: size mismatch");
  }
  Dft dft(grid.n);
  const BoundaryPhase phase(grid);
  for (int k = 0; k < grid.n; ++k) {
    dft.in()[k] = std::conj(phase(k)) * coeff[k];
  }
  dft.execute_forward();
  std::vector<std::complex<double>> f(grid.n);
  const double scale = 1.0 / grid.length();
  for (int j = 0; j < grid.n; ++j) f[j] = scale * dft.out()[j];
  return f;
}

std::vector<double> inverse_transform_real(
    const Grid& grid, std::span<const std::complex<double>> coeff,
    double* imag_residue) {
  auto c = inverse_transform(grid, coeff);
  std::vector<double> f(grid.n);
  double worst = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    f[j] = c[j].real();
    worst = std::max(worst, std::abs(c[j].imag()));
  }
  if (imag_residue) *imag_residue = worst;
  return f;
}

}  // namespace fdte
