#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fdte/kernels.hpp"

using namespace fdte;
using kernels::cplx;

namespace {

std::vector<double> random_doubles(std::mt19937& gen, std::size_t n, double lo,
                                   double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

std::vector<cplx> random_complexes(std::mt19937& gen, std::size_t n) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(d(gen), d(gen));
  return v;
}

void check_close(const std::vector<cplx>& a, const std::vector<cplx>& b,
                 double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1.0});
    CHECK(std::abs(a[i] - b[i]) <= tol * scale);
  }
}

}  // namespace

TEST_CASE("scalar and simd kernels agree") {
  if (!kernels::simd_supported()) return;
  const auto& scalar = kernels::ops(kernels::Backend::scalar);
  const auto& simd = kernels::ops(kernels::Backend::simd);
  std::mt19937 gen(991);

  // Odd length exercises the tail loops.
  const std::size_t n = 1027;

  SUBCASE("cmul") {
    const auto a = random_complexes(gen, n);
    const auto b = random_complexes(gen, n);
    std::vector<cplx> r1(n), r2(n);
    scalar.cmul(a.data(), b.data(), r1.data(), n);
    simd.cmul(a.data(), b.data(), r2.data(), n);
    check_close(r1, r2, 1e-15);
  }

  SUBCASE("exp_scale") {
    const auto psi = random_complexes(gen, n);
    std::vector<cplx> r1(n), r2(n);
    scalar.exp_scale(psi.data(), 0.75, r1.data(), n);
    simd.exp_scale(psi.data(), 0.75, r2.data(), n);
    check_close(r1, r2, 1e-13);
  }

  SUBCASE("rf_psi") {
    auto xi = random_doubles(gen, n, -50.0, 50.0);
    xi[17] = 0.0;
    std::vector<cplx> r1(n), r2(n);
    scalar.rf_psi(xi.data(), 1.7, 0.3, -0.9, r1.data(), n);
    simd.rf_psi(xi.data(), 1.7, 0.3, -0.9, r2.data(), n);
    check_close(r1, r2, 1e-13);
  }

  SUBCASE("stable_transform") {
    const auto v = random_doubles(gen, n, -M_PI / 2 + 1e-3, M_PI / 2 - 1e-3);
    const auto w = random_doubles(gen, n, 1e-3, 5.0);
    const auto clock = random_doubles(gen, n, 0.0, 4.0);
    std::vector<double> r1(n), r2(n);
    scalar.stable_transform(v.data(), w.data(), clock.data(), 1.5,
                            -0.5 * M_PI * 0.5 / 1.5, r1.data(), n);
    simd.stable_transform(v.data(), w.data(), clock.data(), 1.5,
                          -0.5 * M_PI * 0.5 / 1.5, r2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const double scale = std::max({std::abs(r1[i]), std::abs(r2[i]), 1.0});
      CHECK(std::abs(r1[i] - r2[i]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("kernel semantics") {
  const auto& ops = kernels::ops();

  SUBCASE("rf_psi at xi = 0 and conjugate symmetry") {
    const double xi[2] = {0.0, -3.0};
    cplx out[2];
    ops.rf_psi(xi, 1.3, 0.6, 0.4, out, 2);
    CHECK(out[0] == cplx(0.0, 0.0));
    const double xi_pos = 3.0;
    cplx out_pos;
    ops.rf_psi(&xi_pos, 1.3, 0.6, 0.4, &out_pos, 1);
    CHECK(std::abs(out[1] - std::conj(out_pos)) <= 1e-15);
  }

  SUBCASE("exp_scale matches std::exp") {
    const cplx psi(0.7, -1.2);
    cplx out;
    ops.exp_scale(&psi, 2.0, &out, 1);
    CHECK(std::abs(out - std::exp(-2.0 * psi)) <= 1e-15);
  }

  SUBCASE("cmul on a known product") {
    const cplx a(1.0, 2.0), b(3.0, -1.0);
    cplx out;
    ops.cmul(&a, &b, &out, 1);
    CHECK(out == a * b);
  }
}

TEST_CASE("backend selection") {
  const kernels::Backend before = kernels::active_backend();
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::ops().name == std::string("scalar"));
  if (kernels::simd_supported()) {
    kernels::set_backend(kernels::Backend::simd);
    CHECK(kernels::ops().name == std::string("simd"));
  }
  kernels::set_backend(before);
}
