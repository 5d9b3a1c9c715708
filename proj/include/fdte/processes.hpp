#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fdte/grid.hpp"
#include "fdte/stable.hpp"
#include "fdte/subordinators.hpp"

namespace fdte {

/// Stable process run on a random clock: S_{alpha,theta}(clock(t)).
struct ProcessSpec {
  StableParams stable;
  TimeChangeSpec clock;

  void validate() const;
};

// E exp(i xi process(t)). Equals the clock Laplace transform evaluated at
// psi(xi). The gamma-clock analytics require theta = 0.
std::complex<double> char_fn(const ProcessSpec& spec, double t, double xi);

// Density by Fourier inversion of char_fn on the given lattice (no internal
// refinement; dual-route checks need both routes to share the lattice).
DensityResult charfn_density(const ProcessSpec& spec, double t, const Grid& grid,
                             double decay_tol = 1e-10);

// Density as a clock mixture of stable densities, truncated once the
// remaining clock mass drops below truncation_eps, then renormalized; the
// retained mass is reported on the result. A drift-free Poisson clock puts
// an atom at the origin. The gamma clock has no usable series and goes
// through Fourier inversion.
DensityResult mixture_density(const ProcessSpec& spec, double t,
                              const Grid& grid, double truncation_eps);

double sample_process(const ProcessSpec& spec, double t, RngStream& rng);

// Deterministic fan-out: draw n samples using `workers` independent streams
// derived from the master seed. Identical (seed, workers) gives identical
// output, independent of scheduling.
std::vector<double> sample_process_batch(const ProcessSpec& spec, double t,
                                         std::size_t n,
                                         std::uint64_t master_seed,
                                         int workers = 1);

// Var process(t) for alpha = 2, theta = 0. The birth-clock value is derived
// from the pmf (2(at + E B(t))); the literature also prints 2(at + 1/lambda),
// exposed separately for comparison.
double variance_closed_form(const ProcessSpec& spec, double t);
double birth_variance_printed(double a, double lambda, double t);
double birth_clock_mean(double lambda, double t);  // E B(t) summed from the pmf

struct LevyTriplet {
  double diffusion_A = 0.0;
  double drift_gamma = 0.0;
  std::vector<double> xs;
  std::vector<double> nu;
};

// Levy triplet with the jump density tabulated on xs (symmetric, excluding
// 0). The birth-clock process is not Levy and is rejected.
LevyTriplet levy_triplet(const ProcessSpec& spec, std::span<const double> xs);

// E|process(t)|^gamma for gamma in (-1, alpha). For the gamma clock this
// evaluates both the Wright-series closed form and the direct integral and
// requires them to agree to 1e-6 relative; the two routes are also exposed
// separately.
double frac_moment(const ProcessSpec& spec, double gamma_order, double t);
double frac_moment_gamma_quadrature(const ProcessSpec& spec, double gamma_order,
                                    double t);
double frac_moment_gamma_wright(const ProcessSpec& spec, double gamma_order,
                                double t);

struct TailConstants {
  double right;
  double left;
};

// lim x^alpha P(process(t) > x) on the validated branch alpha in (0,1),
// theta = -alpha (one-sided law; the left limit is 0).
TailConstants tail_constant(const ProcessSpec& spec, double t);

struct TailEstimate {
  double x;
  double value;      // x^alpha * empirical survival
  double std_error;  // binomial
};

std::vector<TailEstimate> empirical_tail(std::span<const double> samples,
                                         double alpha,
                                         std::span<const double> probes);

std::vector<double> empirical_quantiles(std::span<const double> samples,
                                        std::span<const double> qs);

}  // namespace fdte
