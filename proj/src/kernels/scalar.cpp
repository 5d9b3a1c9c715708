// Scalar reference kernels. The simd variants must match these; keep the
// arithmetic here straightforward.

#include <cmath>

#include "kernels/tables.hpp"

namespace fdte::kernels {

namespace {

void cmul_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void exp_scale_scalar(const cplx* psi, double t, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::exp(-t * psi[i].real());
    const double ang = -t * psi[i].imag();
    out[i] = cplx(mag * std::cos(ang), mag * std::sin(ang));
  }
}

void rf_psi_scalar(const double* xi, double alpha, double cos_half,
                   double sin_half, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::pow(std::abs(xi[i]), alpha);
    const double s = xi[i] < 0.0 ? -1.0 : (xi[i] > 0.0 ? 1.0 : 0.0);
    out[i] = cplx(m * cos_half, s * m * sin_half);
  }
}

void stable_transform_scalar(const double* v, const double* w,
                             const double* clock, double alpha, double phi0,
                             double* out, std::size_t n) {
  const double inv_alpha = 1.0 / alpha;
  const double exp_ratio = (1.0 - alpha) * inv_alpha;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = alpha * (v[i] + phi0);
    const double core = std::sin(k) * std::pow(std::cos(v[i]), -inv_alpha) *
                        std::pow(std::cos(v[i] - k) / w[i], exp_ratio);
    out[i] = std::pow(clock[i], inv_alpha) * core;
  }
}

}  // namespace

const Ops scalar_ops = {"scalar", cmul_scalar, exp_scale_scalar, rf_psi_scalar,
                        stable_transform_scalar};

}  // namespace fdte::kernels
