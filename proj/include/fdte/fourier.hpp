#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fdte/grid.hpp"

namespace fdte {

/// Unnormalized complex-to-complex DFT of fixed size, FFTW-backed.
/// backward: out[k] = sum_j in[j] e^{+2 pi i j k / n}
/// forward:  out[j] = sum_k in[k] e^{-2 pi i j k / n}
class Dft {
 public:
  explicit Dft(int n);
  ~Dft();
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  int size() const { return n_; }
  std::complex<double>* in() { return in_; }
  const std::complex<double>* out() const { return out_; }
  void execute_forward();
  void execute_backward();

 private:
  int n_;
  std::complex<double>* in_;
  std::complex<double>* out_;
  void* plan_fwd_;
  void* plan_bwd_;
};

// Continuum conventions (matching characteristic functions):
//   forward:  c_k ~ f~(xi_k) = int e^{i x xi} f(x) dx
//   inverse:  f(x_j) = (1/2pi) int e^{-i x xi} f~(xi) dxi
SpectralField forward_transform(const Grid& grid, std::span<const double> f);

std::vector<double> inverse_transform_real(const Grid& grid,
                                           std::span<const std::complex<double>> coeff,
                                           double* imag_residue = nullptr);

std::vector<std::complex<double>> inverse_transform(
    const Grid& grid, std::span<const std::complex<double>> coeff);

}  // namespace fdte
