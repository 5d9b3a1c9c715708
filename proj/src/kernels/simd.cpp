// SIMD kernel variants. On x86-64 this TU is built with -mavx2 -mfma and is
// only entered after dispatch.cpp verifies cpu support; elsewhere it builds
// with the native ABI (NEON on aarch64). Complex multiplication uses AVX2
// intrinsics directly; the transcendental kernels go through
// std::experimental::simd.

#include <cmath>
#include <cstddef>
#include <experimental/simd>

#if defined(__AVX2__)
#include <immintrin.h>
#endif

#include "kernels/tables.hpp"

namespace stdx = std::experimental;

namespace fdte::kernels {

namespace {

using vd = stdx::native_simd<double>;
constexpr std::size_t kLanes = vd::size();

void cmul_simd(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
#if defined(__AVX2__)
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  const std::size_t nd = 2 * n;
  std::size_t i = 0;
  for (; i + 4 <= nd; i += 4) {
    const __m256d va = _mm256_loadu_pd(pa + i);
    const __m256d vb = _mm256_loadu_pd(pb + i);
    const __m256d br = _mm256_movedup_pd(vb);        // [b0r b0r b1r b1r]
    const __m256d bi = _mm256_permute_pd(vb, 0xF);   // [b0i b0i b1i b1i]
    const __m256d as = _mm256_permute_pd(va, 0x5);   // [a0i a0r a1i a1r]
    const __m256d t = _mm256_mul_pd(as, bi);
    _mm256_storeu_pd(po + i, _mm256_fmaddsub_pd(va, br, t));
  }
  for (; i < nd; i += 2) {
    const double ar = pa[i], ai = pa[i + 1], br2 = pb[i], bi2 = pb[i + 1];
    po[i] = ar * br2 - ai * bi2;
    po[i + 1] = ar * bi2 + ai * br2;
  }
#else
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
#endif
}

void exp_scale_simd(const cplx* psi, double t, cplx* out, std::size_t n) {
  double re[kLanes], im[kLanes], or_[kLanes], oi[kLanes];
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) {
      re[l] = psi[i + l].real();
      im[l] = psi[i + l].imag();
    }
    vd vre, vim;
    vre.copy_from(re, stdx::element_aligned);
    vim.copy_from(im, stdx::element_aligned);
    const vd mag = stdx::exp(vd(-t) * vre);
    const vd ang = vd(-t) * vim;
    (mag * stdx::cos(ang)).copy_to(or_, stdx::element_aligned);
    (mag * stdx::sin(ang)).copy_to(oi, stdx::element_aligned);
    for (std::size_t l = 0; l < kLanes; ++l) out[i + l] = cplx(or_[l], oi[l]);
  }
  for (; i < n; ++i) {
    const double mag = std::exp(-t * psi[i].real());
    const double ang = -t * psi[i].imag();
    out[i] = cplx(mag * std::cos(ang), mag * std::sin(ang));
  }
}

void rf_psi_simd(const double* xi, double alpha, double cos_half,
                 double sin_half, cplx* out, std::size_t n) {
  double or_[kLanes], oi[kLanes];
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vd x;
    x.copy_from(xi + i, stdx::element_aligned);
    const vd m = stdx::pow(stdx::abs(x), vd(alpha));
    vd s = vd(0.0);
    stdx::where(x > 0.0, s) = vd(1.0);
    stdx::where(x < 0.0, s) = vd(-1.0);
    (m * cos_half).copy_to(or_, stdx::element_aligned);
    (s * m * sin_half).copy_to(oi, stdx::element_aligned);
    for (std::size_t l = 0; l < kLanes; ++l) out[i + l] = cplx(or_[l], oi[l]);
  }
  for (; i < n; ++i) {
    const double m = std::pow(std::abs(xi[i]), alpha);
    const double s = xi[i] < 0.0 ? -1.0 : (xi[i] > 0.0 ? 1.0 : 0.0);
    out[i] = cplx(m * cos_half, s * m * sin_half);
  }
}

void stable_transform_simd(const double* v, const double* w,
                           const double* clock, double alpha, double phi0,
                           double* out, std::size_t n) {
  const double inv_alpha = 1.0 / alpha;
  const double exp_ratio = (1.0 - alpha) * inv_alpha;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vd vv, vw, vc;
    vv.copy_from(v + i, stdx::element_aligned);
    vw.copy_from(w + i, stdx::element_aligned);
    vc.copy_from(clock + i, stdx::element_aligned);
    const vd k = vd(alpha) * (vv + phi0);
    const vd core = stdx::sin(k) * stdx::pow(stdx::cos(vv), vd(-inv_alpha)) *
                    stdx::pow(stdx::cos(vv - k) / vw, vd(exp_ratio));
    (stdx::pow(vc, vd(inv_alpha)) * core).copy_to(out + i, stdx::element_aligned);
  }
  for (; i < n; ++i) {
    const double k = alpha * (v[i] + phi0);
    const double core = std::sin(k) * std::pow(std::cos(v[i]), -inv_alpha) *
                        std::pow(std::cos(v[i] - k) / w[i], exp_ratio);
    out[i] = std::pow(clock[i], inv_alpha) * core;
  }
}

}  // namespace

const Ops simd_ops = {"simd", cmul_simd, exp_scale_simd, rf_psi_simd,
                      stable_transform_simd};

}  // namespace fdte::kernels
