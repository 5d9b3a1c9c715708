#pragma once

#include <complex>
#include <cstddef>

namespace fdte::kernels {

using cplx = std::complex<double>;

/// Data-parallel inner loops behind the spectral and sampling code paths.
/// Every entry has a scalar reference implementation and a SIMD variant;
/// the active table is selected at runtime (cpuid, FDTE_KERNELS override)
/// and the two are equivalence-tested against each other.
struct Ops {
  const char* name;

  // out[i] = a[i] * b[i]
  void (*cmul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);

  // out[i] = exp(-t * psi[i])
  void (*exp_scale)(const cplx* psi, double t, cplx* out, std::size_t n);

  // out[i] = |xi[i]|^alpha * (cos_half + i sign(xi[i]) sin_half)
  void (*rf_psi)(const double* xi, double alpha, double cos_half,
                 double sin_half, cplx* out, std::size_t n);

  // Trigonometric stable-variate transform. v[i] in (-pi/2, pi/2) uniform,
  // w[i] standard exponential, clock[i] >= 0 the time argument:
  //   out[i] = clock[i]^{1/alpha} * sin(alpha (v + phi0)) / cos(v)^{1/alpha}
  //            * (cos(v - alpha (v + phi0)) / w)^{(1-alpha)/alpha}
  void (*stable_transform)(const double* v, const double* w,
                           const double* clock, double alpha, double phi0,
                           double* out, std::size_t n);
};

enum class Backend { scalar, simd };

bool simd_supported();
Backend active_backend();
void set_backend(Backend b);  // throws DomainError if unsupported
const Ops& ops();             // active table
const Ops& ops(Backend b);    // explicit table (for equivalence tests)

}  // namespace fdte::kernels
