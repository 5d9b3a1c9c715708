#include "fdte/stable.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdte/errors.hpp"
#include "fdte/fourier.hpp"
#include "fdte/kernels.hpp"
#include "fdte/quadrature.hpp"
#include "fdte/special_functions.hpp"

namespace fdte {

StableParams::StableParams(double alpha_, double theta_)
    : alpha(alpha_), theta(theta_) {
  if (!(alpha > 0.0) || alpha > 2.0) {
    throw DomainError("StableParams: alpha must lie in (0, 2]");
  }
  const double bound = std::min(alpha, 2.0 - alpha);
  if (std::abs(theta) > bound + 1e-12) {
    throw DomainError("StableParams: |theta| must not exceed min(alpha, 2-alpha)");
  }
}

std::complex<double> rf_symbol(const StableParams& p, double xi) {
  const double m = std::pow(std::abs(xi), p.alpha);
  const double half = 0.5 * M_PI * p.theta;
  const double s = xi < 0.0 ? -1.0 : (xi > 0.0 ? 1.0 : 0.0);
  return {m * std::cos(half), s * m * std::sin(half)};
}

void rf_symbol_grid(const StableParams& p, std::span<const double> xi,
                    std::span<std::complex<double>> out) {
  if (xi.size() != out.size()) throw DomainError("rf_symbol_grid: size mismatch");
  const double half = 0.5 * M_PI * p.theta;
  kernels::ops().rf_psi(xi.data(), p.alpha, std::cos(half), std::sin(half),
                        out.data(), xi.size());
}

namespace {

// The trigonometric construction is reparameterized so its output has
// characteristic function exp(-t psi) exactly: with phi0 = -pi theta /
// (2 alpha) the usual skew and scale factors collapse into t^{1/alpha}.
double cms_draw(const StableParams& p, double t, RngStream& rng) {
  const double v = M_PI * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double phi0 = -0.5 * M_PI * p.theta / p.alpha;
  const double k = p.alpha * (v + phi0);
  const double core = std::sin(k) * std::pow(std::cos(v), -1.0 / p.alpha) *
                      std::pow(std::cos(v - k) / w, (1.0 - p.alpha) / p.alpha);
  return std::pow(t, 1.0 / p.alpha) * core;
}

}  // namespace

double sample_stable(const StableParams& p, double t, RngStream& rng) {
  if (t < 0.0) throw DomainError("sample_stable: t must be nonnegative");
  if (t == 0.0) return 0.0;
  if (p.alpha == 2.0) return std::sqrt(2.0 * t) * rng.normal();
  if (p.alpha == 1.0) {
    if (p.theta != 0.0) {
      throw DomainError("sample_stable: alpha = 1 supported only for theta = 0");
    }
    return t * std::tan(M_PI * (rng.uniform() - 0.5));
  }
  return cms_draw(p, t, rng);
}

void sample_stable_batch(const StableParams& p, std::span<const double> clock,
                         RngStream& rng, std::span<double> out) {
  if (clock.size() != out.size()) {
    throw DomainError("sample_stable_batch: size mismatch");
  }
  const std::size_t n = clock.size();
  if (p.alpha == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = std::sqrt(2.0 * clock[i]) * rng.normal();
    }
    return;
  }
  if (p.alpha == 1.0) {
    if (p.theta != 0.0) {
      throw DomainError("sample_stable_batch: alpha = 1 supported only for theta = 0");
    }
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = clock[i] * std::tan(M_PI * (rng.uniform() - 0.5));
    }
    return;
  }
  const double phi0 = -0.5 * M_PI * p.theta / p.alpha;
  constexpr std::size_t kBlock = 8192;
  std::vector<double> v(kBlock), w(kBlock);
  std::size_t off = 0;
  while (off < n) {
    const std::size_t m = std::min(kBlock, n - off);
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = M_PI * (rng.uniform() - 0.5);
      w[i] = rng.exponential();
    }
    kernels::ops().stable_transform(v.data(), w.data(), clock.data() + off,
                                    p.alpha, phi0, out.data() + off, m);
    off += m;
  }
}

namespace {

double charfn_modulus(const StableParams& p, double t, double xi) {
  return std::exp(-t * std::pow(std::abs(xi), p.alpha) *
                  std::cos(0.5 * M_PI * p.theta));
}

// Mass folded back into the window [-L/2, L/2] when the density is
// periodized with period P, estimated from the power tails.
double alias_estimate(const StableParams& p, double t, double window_len,
                      double period) {
  if (p.alpha >= 2.0) return 0.0;
  const double c = stable_tail_amplitude_right(p) + stable_tail_amplitude_left(p);
  double s = 0.0;
  for (int m = 1; m <= 8; ++m) {
    const double d = m * period - 0.5 * window_len;
    if (d <= 0.0) return 1.0;
    s += std::pow(d, -1.0 - p.alpha);
  }
  return 1.1 * t * c * s;
}

}  // namespace

DensityResult stable_density_fft(const StableParams& p, double t,
                                 const Grid& grid, const DensityOptions& opts) {
  if (!(t > 0.0)) throw DomainError("stable_density_fft: t must be positive");
  if (p.alpha == 1.0 && p.theta != 0.0) {
    throw DomainError("stable_density_fft: alpha = 1 supported only for theta = 0");
  }

  const double L = grid.length();
  std::int64_t widen = 1;   // window multiplier against periodization
  std::int64_t refine = 1;  // lattice refinement pushing the boundary frequency

  if (opts.refine) {
    while (alias_estimate(p, t, L, widen * L) > opts.alias_tol) {
      widen *= 2;
      if (widen * grid.n > opts.max_points) {
        throw GridError("stable_density_fft: grid too narrow (periodization)");
      }
    }
    while (charfn_modulus(p, t, M_PI * grid.n * refine / L) > opts.decay_tol) {
      refine *= 2;
      if (widen * refine * grid.n > opts.max_points) {
        throw GridError("stable_density_fft: grid too narrow (boundary decay)");
      }
    }
    if (widen * refine * grid.n > opts.max_points) {
      throw GridError("stable_density_fft: grid too narrow");
    }
  } else if (charfn_modulus(p, t, grid.xi_boundary()) > opts.decay_tol) {
    throw GridError("stable_density_fft: characteristic function does not decay "
                    "below tolerance at the boundary frequency");
  }

  const std::int64_t n_int = grid.n * widen * refine;
  const Grid internal(grid.x_min - 0.5 * (widen - 1) * L,
                      grid.x_max + 0.5 * (widen - 1) * L,
                      static_cast<int>(n_int));

  // c_k = exp(-t psi(xi_k)) filled blockwise, then one inverse transform.
  Dft dft(internal.n);
  {
    constexpr int kBlock = 8192;
    std::vector<double> xi(kBlock);
    std::vector<std::complex<double>> psi(kBlock);
    const double half = 0.5 * M_PI * p.theta;
    const double ch = std::cos(half), sh = std::sin(half);
    const bool alternating =
        std::abs(internal.x_min + 0.5 * internal.length()) < 1e-14 * internal.length();
    for (int off = 0; off < internal.n; off += kBlock) {
      const int m = std::min(kBlock, internal.n - off);
      for (int i = 0; i < m; ++i) xi[i] = internal.xi(off + i);
      kernels::ops().rf_psi(xi.data(), p.alpha, ch, sh, psi.data(), m);
      kernels::ops().exp_scale(psi.data(), t, dft.in() + off, m);
      for (int i = 0; i < m; ++i) {
        const int k = off + i;
        if (alternating) {
          if (k & 1) dft.in()[k] = -dft.in()[k];
        } else {
          const double ph = -internal.xi(k) * internal.x_min;
          dft.in()[k] *= std::complex<double>(std::cos(ph), std::sin(ph));
        }
      }
    }
  }
  dft.execute_forward();

  const double scale = 1.0 / internal.length();
  const std::int64_t stride = refine;
  const std::int64_t offset = (widen - 1) * grid.n * refine / 2;
  std::vector<double> values(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    values[j] = scale * dft.out()[offset + j * stride].real();
  }

  // Clip round-off negatives, then restore the signed in-window mass.
  double signed_mass = 0.0, positive_mass = 0.0;
  for (double& v : values) {
    signed_mass += v;
    if (v < 0.0) v = 0.0;
    positive_mass += v;
  }
  if (positive_mass > 0.0 && signed_mass > 0.0) {
    const double s = signed_mass / positive_mass;
    for (double& v : values) v *= s;
  }

  DensityResult result{grid, std::move(values), std::nullopt, 1.0};
  result.retained_mass = result.mass();
  return result;
}

double stable_abs_moment(double alpha, double gamma_order) {
  if (!(alpha > 0.0) || alpha > 2.0) {
    throw DomainError("stable_abs_moment: alpha must lie in (0, 2]");
  }
  if (!(gamma_order > -1.0) || !(gamma_order < alpha)) {
    throw DomainError("stable_abs_moment: order must lie in (-1, alpha)");
  }
  const double g = gamma_order;
  return std::pow(2.0, g) *
         std::exp(log_gamma(1.0 - g / alpha) + log_gamma(0.5 * (1.0 + g)) -
                  log_gamma(1.0 - 0.5 * g)) /
         std::sqrt(M_PI);
}

double stable_abs_moment_skewed(const StableParams& p, double gamma_order) {
  return stable_abs_moment(p.alpha, gamma_order) *
         std::cos(0.5 * M_PI * gamma_order * p.theta / p.alpha);
}

double stable_tail_amplitude_right(const StableParams& p) {
  if (p.alpha >= 2.0) return 0.0;
  return std::exp(log_gamma(1.0 + p.alpha)) *
         sin_pi(0.5 * (p.alpha - p.theta)) / M_PI;
}

double stable_tail_amplitude_left(const StableParams& p) {
  if (p.alpha >= 2.0) return 0.0;
  return std::exp(log_gamma(1.0 + p.alpha)) *
         sin_pi(0.5 * (p.alpha + p.theta)) / M_PI;
}

double realspace_riesz(const std::function<double(double)>& f, double alpha,
                       double x, double support_radius, double tol) {
  if (!(alpha > 0.0) || !(alpha < 2.0)) {
    throw DomainError("realspace_riesz: alpha must lie in (0, 2)");
  }
  const double prefactor =
      std::exp(log_gamma(1.0 + alpha)) / M_PI * std::sin(0.5 * M_PI * alpha);

  // Near z = 0 the second difference is f''(x) z^2 + f''''(x) z^4 / 12.
  const double z0 = 0.05;
  const double h = 1e-2;
  const double f2 =
      (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) /
      (12 * h * h);
  const double h4 = 5e-2;
  const double f4 = (f(x - 2 * h4) - 4 * f(x - h4) + 6 * f(x) - 4 * f(x + h4) +
                     f(x + 2 * h4)) /
                    (h4 * h4 * h4 * h4);
  const double small_part = f2 * std::pow(z0, 2.0 - alpha) / (2.0 - alpha) +
                            f4 * std::pow(z0, 4.0 - alpha) / (12.0 * (4.0 - alpha));

  const double z_max = support_radius + std::abs(x) + 1.0;
  const double mid_part = integrate(
      [&](double z) {
        return (f(x + z) - 2.0 * f(x) + f(x - z)) / std::pow(z, 1.0 + alpha);
      },
      z0, z_max, tol);

  // f vanishes beyond the support, leaving -2 f(x) / z^{1+alpha}.
  const double tail_part = -2.0 * f(x) * std::pow(z_max, -alpha) / alpha;

  return prefactor * (small_part + mid_part + tail_part);
}

}  // namespace fdte
