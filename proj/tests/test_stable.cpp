#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "fdte/errors.hpp"
#include "fdte/quadrature.hpp"
#include "fdte/stable.hpp"
#include "test_support.hpp"

using namespace fdte;

TEST_CASE("admissibility wedge") {
  CHECK_NOTHROW(StableParams(2.0, 0.0));
  CHECK_NOTHROW(StableParams(0.5, -0.5));
  CHECK_NOTHROW(StableParams(1.0, -1.0));
  CHECK_NOTHROW(StableParams(1.5, 0.5));
  CHECK_THROWS_AS(StableParams(2.0, 0.1), DomainError);
  CHECK_THROWS_AS(StableParams(0.5, -0.6), DomainError);
  CHECK_THROWS_AS(StableParams(2.5, 0.0), DomainError);
  CHECK_THROWS_AS(StableParams(0.0, 0.0), DomainError);
}

TEST_CASE("rf_symbol: known values") {
  CHECK(std::abs(rf_symbol(StableParams(2.0, 0.0), 2.0) -
                 std::complex<double>(4.0, 0.0)) <= 1e-14);
  CHECK(rf_symbol(StableParams(1.7, 0.2), 0.0) == std::complex<double>(0.0, 0.0));
  // Riemann-Liouville case: psi(1) = e^{-i pi/4}.
  const auto v = rf_symbol(StableParams(0.5, -0.5), 1.0);
  CHECK(v.real() == doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-14));
  CHECK(v.imag() == doctest::Approx(-std::sin(M_PI / 4)).epsilon(1e-14));
}

TEST_CASE("rf_symbol: conjugate symmetry and nonnegative real part") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> ua(0.05, 2.0);
  std::uniform_real_distribution<double> ut(-1.0, 1.0);
  std::uniform_real_distribution<double> ux(-30.0, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double alpha = ua(gen);
    const double bound = std::min(alpha, 2.0 - alpha);
    const StableParams p(alpha, bound * ut(gen));
    const double xi = ux(gen);
    const auto plus = rf_symbol(p, xi);
    const auto minus = rf_symbol(p, -xi);
    CHECK(std::abs(minus - std::conj(plus)) <= 1e-13 * (1.0 + std::abs(plus)));
    CHECK(plus.real() >= 0.0);
  }
}

TEST_CASE("sampler: Gaussian branch variance") {
  RngStream rng(1234);
  const StableParams p(2.0, 0.0);
  std::vector<double> draws(1000000);
  for (auto& d : draws) d = sample_stable(p, 1.0, rng);
  const auto m = testsup::sample_moments(draws);
  CHECK(std::abs(m.variance - 2.0) <= 0.02);
}

TEST_CASE("sampler: subordinator positivity and t = 0") {
  RngStream rng(77);
  const StableParams p(0.5, -0.5);
  CHECK(sample_stable(p, 0.0, rng) == 0.0);
  for (int i = 0; i < 100000; ++i) {
    CHECK(sample_stable(p, 1.0, rng) > 0.0);
  }
}

TEST_CASE("sampler: Cauchy branch median") {
  RngStream rng(4321);
  const StableParams p(1.0, 0.0);
  std::vector<double> draws(1000000);
  for (auto& d : draws) d = sample_stable(p, 1.0, rng);
  std::nth_element(draws.begin(), draws.begin() + draws.size() / 2, draws.end());
  CHECK(std::abs(draws[draws.size() / 2]) <= 0.01);
  CHECK_THROWS_AS(sample_stable(StableParams(1.0, -0.3), 1.0, rng), DomainError);
}

TEST_CASE("sampler: empirical characteristic function matches exp(-t psi)") {
  // Validates the reparameterization of the trigonometric construction.
  const double t = 1.3;
  RngStream rng(5150);
  for (const auto& p : {StableParams(1.5, 0.5), StableParams(0.7, -0.3),
                        StableParams(1.2, -0.8), StableParams(2.0, 0.0),
                        StableParams(0.5, -0.5)}) {
    std::vector<double> clock(400000, t), draws(clock.size());
    sample_stable_batch(p, clock, rng, draws);
    for (double xi : {0.5, 1.0, 2.0}) {
      const auto ecf = testsup::empirical_charfn(draws, xi);
      const auto target = std::exp(-t * rf_symbol(p, xi));
      CHECK(std::abs(ecf.value.real() - target.real()) <= 3.0 * ecf.se_re);
      CHECK(std::abs(ecf.value.imag() - target.imag()) <= 3.0 * ecf.se_im);
    }
  }
}

TEST_CASE("density: Gaussian case on the reference lattice") {
  const Grid grid(-40.0, 40.0, 4096);
  const DensityResult d = stable_density_fft(StableParams(2.0, 0.0), 1.0, grid);
  const int j0 = grid.n / 2;  // x = 0
  CHECK(grid.x(j0) == 0.0);
  CHECK(std::abs(d.values[j0] - 1.0 / (2.0 * std::sqrt(M_PI))) <= 1e-8);
  CHECK(std::abs(d.mass() - 1.0) <= 1e-6);
}

TEST_CASE("density: Cauchy case") {
  const Grid grid(-40.0, 40.0, 4096);
  const DensityResult d = stable_density_fft(StableParams(1.0, 0.0), 1.0, grid);
  CHECK(std::abs(d.values[grid.n / 2] - 1.0 / M_PI) <= 1e-6);
  // In-window mass of the true law: (2/pi) arctan(40).
  const double expected_mass = 2.0 / M_PI * std::atan(40.0);
  CHECK(std::abs(d.mass() - expected_mass) <= 2e-4);
}

TEST_CASE("density: one-sided Levy case") {
  const Grid grid(-40.0, 40.0, 4096);
  const DensityResult d = stable_density_fft(StableParams(0.5, -0.5), 1.0, grid);
  double worst = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    if (x < 0.05 || x > 20.0) continue;
    worst = std::max(worst, std::abs(d.values[j] - testsup::levy_density(x, 1.0)));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("density: self-similar scaling") {
  const StableParams p(1.5, 0.5);
  const double t = 2.7;
  const double s = std::pow(t, -1.0 / p.alpha);
  const Grid grid(-60.0, 60.0, 2048);
  const Grid scaled(grid.x_min * s, grid.x_max * s, grid.n);
  const DensityResult pt = stable_density_fft(p, t, grid);
  const DensityResult p1 = stable_density_fft(p, 1.0, scaled);
  double worst = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    worst = std::max(worst, std::abs(pt.values[j] - s * p1.values[j]));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("density: mass reaches 1 on mass-complete windows") {
  CHECK(std::abs(stable_density_fft(StableParams(2.0, 0.0), 0.5,
                                    Grid(-40.0, 40.0, 1024)).mass() - 1.0) <= 1e-6);
  CHECK(std::abs(stable_density_fft(StableParams(1.8, 0.2), 1.0,
                                    Grid(-1024.0, 1024.0, 65536)).mass() - 1.0) <=
        1e-6);
}

TEST_CASE("density: boundary-decay rejection without refinement") {
  DensityOptions opts;
  opts.refine = false;
  CHECK_THROWS_AS(stable_density_fft(StableParams(0.5, -0.5), 1.0,
                                     Grid(-40.0, 40.0, 4096), opts),
                  GridError);
  CHECK_THROWS_AS(stable_density_fft(StableParams(1.0, 0.0), 1e-9,
                                     Grid(-40.0, 40.0, 256)),
                  GridError);
}

TEST_CASE("stable_abs_moment: known values and domain") {
  CHECK(stable_abs_moment(2.0, 1.0) ==
        doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(stable_abs_moment(1.7, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // Cauchy order 1/2 against quadrature of |x|^{1/2}/(pi(1+x^2)).
  const double oracle = 2.0 / M_PI *
                        integrate_to_inf(
                            [](double x) {
                              return std::sqrt(x) / (1.0 + x * x);
                            },
                            0.0, 1e-12);
  CHECK(stable_abs_moment(1.0, 0.5) == doctest::Approx(oracle).epsilon(1e-8));
  CHECK_THROWS_AS(stable_abs_moment(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(stable_abs_moment(1.0, -1.0), DomainError);
}

TEST_CASE("skewed absolute moment against Monte Carlo") {
  const StableParams p(1.5, 0.5);
  const double g = 0.5;
  RngStream rng(2024);
  std::vector<double> clock(1000000, 1.0), draws(clock.size());
  sample_stable_batch(p, clock, rng, draws);
  double mean = 0.0, sq = 0.0;
  for (double& d : draws) {
    d = std::sqrt(std::abs(d));
    mean += d;
  }
  mean /= static_cast<double>(draws.size());
  for (double d : draws) sq += (d - mean) * (d - mean);
  const double se = std::sqrt(sq) / static_cast<double>(draws.size());
  CHECK(std::abs(mean - stable_abs_moment_skewed(p, g)) <= 3.0 * se);
}

TEST_CASE("realspace riesz derivative of a Gaussian bump") {
  auto f = [](double x) { return std::exp(-x * x); };
  // alpha = 1 at x = 0: spectral value -(1/pi) int |xi| sqrt(pi) e^{-xi^2/4}
  // = -2/sqrt(pi).
  CHECK(realspace_riesz(f, 1.0, 0.0, 8.0) ==
        doctest::Approx(-2.0 / std::sqrt(M_PI)).epsilon(1e-6));
  auto zero = [](double) { return 0.0; };
  CHECK(realspace_riesz(zero, 1.3, 0.4, 8.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(realspace_riesz(f, 2.0, 0.0, 8.0), DomainError);
}
