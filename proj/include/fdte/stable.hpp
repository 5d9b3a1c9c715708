#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>

#include "fdte/grid.hpp"
#include "fdte/rng.hpp"

namespace fdte {

/// Stable law in the (alpha, theta) asymmetry convention with characteristic
/// function exp(-t |xi|^alpha e^{i sign(xi) theta pi/2}).
struct StableParams {
  double alpha;
  double theta;

  StableParams(double alpha, double theta);
};

// psi_{alpha,theta}(xi) = |xi|^alpha e^{i sign(xi) theta pi / 2}; the
// derivative symbol is -psi. Re(psi) >= 0 on the admissible wedge.
std::complex<double> rf_symbol(const StableParams& p, double xi);
void rf_symbol_grid(const StableParams& p, std::span<const double> xi,
                    std::span<std::complex<double>> out);

// One draw with characteristic function exp(-t psi(xi)). t = 0 returns 0.
double sample_stable(const StableParams& p, double t, RngStream& rng);

// Batch draws with per-element time arguments (used under random clocks).
void sample_stable_batch(const StableParams& p, std::span<const double> clock,
                         RngStream& rng, std::span<double> out);

struct DensityOptions {
  // Required decay of the characteristic function at the boundary frequency
  // of the (internally refined) transform lattice.
  double decay_tol = 1e-12;
  // Budget for mass folded into the window by periodization.
  double alias_tol = 2e-6;
  std::int64_t max_points = std::int64_t(1) << 23;
  // When false, invert on the caller's lattice verbatim (no refinement);
  // the decay check still applies.
  bool refine = true;
};

// Density of S_{alpha,theta}(t) by discrete Fourier inversion.
DensityResult stable_density_fft(const StableParams& p, double t,
                                 const Grid& grid,
                                 const DensityOptions& opts = {});

// E|S_alpha(1)|^gamma for the symmetric law, gamma in (-1, alpha).
double stable_abs_moment(double alpha, double gamma_order);

// Same for the skewed law: the symmetric constant times cos(gamma theta pi
// / (2 alpha)).
double stable_abs_moment_skewed(const StableParams& p, double gamma_order);

// Tail amplitudes: density(x; t) ~ t c |x|^{-1-alpha} with c_right at +inf
// and c_left at -inf (alpha < 2).
double stable_tail_amplitude_right(const StableParams& p);
double stable_tail_amplitude_left(const StableParams& p);

// Regularized symmetric Riesz derivative of a smooth compactly supported
// function, by quadrature of the second-difference kernel. Real-space
// oracle for the spectral multiplier; alpha in (0,2).
double realspace_riesz(const std::function<double(double)>& f, double alpha,
                       double x, double support_radius, double tol = 1e-9);

}  // namespace fdte
