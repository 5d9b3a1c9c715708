#include "fdte/processes.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fdte/errors.hpp"
#include "fdte/fourier.hpp"
#include "fdte/kernels.hpp"
#include "fdte/quadrature.hpp"
#include "fdte/special_functions.hpp"

namespace fdte {

void ProcessSpec::validate() const { clock.validate(); }

std::complex<double> char_fn(const ProcessSpec& spec, double t, double xi) {
  spec.validate();
  if (t < 0.0) throw DomainError("char_fn: t must be >= 0");
  if (spec.clock.kind == ClockKind::gamma_drift && spec.stable.theta != 0.0) {
    throw DomainError("char_fn: gamma clock requires theta = 0");
  }
  return clock_laplace_transform(spec.clock, rf_symbol(spec.stable, xi), t);
}

namespace {

// Clip round-off negatives and restore the signed mass.
void clip_and_compensate(std::vector<double>& values) {
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
}

}  // namespace

DensityResult charfn_density(const ProcessSpec& spec, double t, const Grid& grid,
                             double decay_tol) {
  spec.validate();
  if (!(t > 0.0)) throw DomainError("charfn_density: t must be positive");
  if (spec.clock.kind == ClockKind::poisson_drift && spec.clock.a == 0.0) {
    throw DomainError("charfn_density: drift-free Poisson clock has an atom; "
                      "use mixture_density");
  }
  std::vector<std::complex<double>> coeff(grid.n);
  for (int k = 0; k < grid.n; ++k) coeff[k] = char_fn(spec, t, grid.xi(k));
  const double edge = std::abs(coeff[grid.n / 2]);
  if (edge > decay_tol) {
    throw GridError("charfn_density: characteristic function does not decay at "
                    "the boundary frequency");
  }
  std::vector<double> values = inverse_transform_real(grid, coeff);
  clip_and_compensate(values);
  DensityResult result{grid, std::move(values), std::nullopt, 1.0};
  return result;
}

DensityResult mixture_density(const ProcessSpec& spec, double t,
                              const Grid& grid, double truncation_eps) {
  spec.validate();
  if (!(t > 0.0)) throw DomainError("mixture_density: t must be positive");
  if (!(truncation_eps > 0.0) || truncation_eps > 1e-3) {
    throw DomainError("mixture_density: truncation_eps must lie in (0, 1e-3]");
  }
  if (spec.clock.kind == ClockKind::gamma_drift) {
    // No series form; the spectral inversion is exact for this clock.
    return charfn_density(spec, t, grid);
  }

  const double a = spec.clock.a;
  const double lambda = spec.clock.lambda;
  const bool poisson = spec.clock.kind == ClockKind::poisson_drift;

  // Clock weights until the remaining mass drops below the threshold.
  std::vector<double> weights;  // weights[i] is P(counts = k_start + i)
  const long k_start = poisson ? 0 : 1;
  double retained = 0.0;
  {
    double w = std::exp(-lambda * t);  // P(k = k_start)
    const double q = -std::expm1(-lambda * t);
    long k = k_start;
    constexpr long kMax = 10000;
    while (true) {
      weights.push_back(w);
      retained += w;
      if (1.0 - retained < truncation_eps) break;
      if (k - k_start + 1 >= kMax) {
        throw NumericalError("mixture_density: clock truncation failed");
      }
      ++k;
      w = poisson ? w * lambda * t / static_cast<double>(k) : w * q;
    }
  }

  std::optional<Atom> atom;
  std::size_t first_spectral = 0;
  if (poisson && a == 0.0) {
    atom = Atom{weights[0], 0.0};  // stable at time 0 is a point mass
    first_spectral = 1;
  }

  // acc(xi) = sum_k w_k e^{-psi(xi)(k + a t)}, accumulated with one
  // e^{-psi} multiply per term.
  const int n = grid.n;
  std::vector<double> xi = grid.xis();
  std::vector<std::complex<double>> psi(n), e_psi(n), cur(n), acc(n, 0.0);
  rf_symbol_grid(spec.stable, xi, psi);
  kernels::ops().exp_scale(psi.data(), 1.0, e_psi.data(), n);
  const double t0 = static_cast<double>(k_start) + a * t;
  if (first_spectral == 0) {
    kernels::ops().exp_scale(psi.data(), t0, cur.data(), n);
  } else {
    kernels::ops().exp_scale(psi.data(), t0 + 1.0, cur.data(), n);
  }
  for (std::size_t i = first_spectral; i < weights.size(); ++i) {
    const double w = weights[i];
    for (int k = 0; k < n; ++k) acc[k] += w * cur[k];
    kernels::ops().cmul(cur.data(), e_psi.data(), cur.data(), n);
  }

  if (std::abs(acc[n / 2]) > 1e-10) {
    throw GridError("mixture_density: spectral accumulator does not decay at "
                    "the boundary frequency");
  }

  std::vector<double> values = inverse_transform_real(grid, acc);
  clip_and_compensate(values);
  // Renormalize the truncated mixture and report what was kept.
  for (double& v : values) v /= retained;
  if (atom) atom->weight /= retained;
  DensityResult result{grid, std::move(values), atom, retained};
  return result;
}

double sample_process(const ProcessSpec& spec, double t, RngStream& rng) {
  spec.validate();
  const double clock = sample_clock(spec.clock, t, rng);
  return sample_stable(spec.stable, clock, rng);
}

namespace {

void fill_samples(const ProcessSpec& spec, double t, RngStream& rng,
                  std::span<double> out) {
  constexpr std::size_t kBlock = 8192;
  std::vector<double> clock(kBlock);
  std::size_t off = 0;
  while (off < out.size()) {
    const std::size_t m = std::min(kBlock, out.size() - off);
    for (std::size_t i = 0; i < m; ++i) {
      clock[i] = sample_clock(spec.clock, t, rng);
    }
    sample_stable_batch(spec.stable, std::span<const double>(clock.data(), m),
                        rng, out.subspan(off, m));
    off += m;
  }
}

}  // namespace

std::vector<double> sample_process_batch(const ProcessSpec& spec, double t,
                                         std::size_t n,
                                         std::uint64_t master_seed,
                                         int workers) {
  spec.validate();
  if (workers < 1) throw DomainError("sample_process_batch: workers must be >= 1");
  std::vector<double> out(n);
  const std::size_t base = n / workers;
  const std::size_t rem = n % workers;
  std::vector<std::thread> pool;
  std::size_t off = 0;
  for (int w = 0; w < workers; ++w) {
    const std::size_t count = base + (static_cast<std::size_t>(w) < rem ? 1 : 0);
    auto task = [&spec, t, master_seed, w, off, count, &out]() {
      RngStream rng = worker_stream(master_seed, static_cast<std::uint64_t>(w));
      fill_samples(spec, t, rng, std::span<double>(out.data() + off, count));
    };
    if (workers == 1) {
      task();
    } else {
      pool.emplace_back(task);
    }
    off += count;
  }
  for (auto& th : pool) th.join();
  return out;
}

double birth_clock_mean(double lambda, double t) {
  if (!(lambda > 0.0) || t < 0.0) {
    throw DomainError("birth_clock_mean: requires lambda > 0, t >= 0");
  }
  const double p = std::exp(-lambda * t);
  double w = p, sum = 0.0;
  for (long k = 1; k < 2000000; ++k) {
    const double term = w * static_cast<double>(k);
    sum += term;
    if (term < 1e-14 * sum && k > 4) return sum;
    w *= 1.0 - p;
  }
  throw NumericalError("birth_clock_mean: series did not converge");
}

double variance_closed_form(const ProcessSpec& spec, double t) {
  spec.validate();
  if (spec.stable.alpha != 2.0 || spec.stable.theta != 0.0) {
    throw DomainError("variance_closed_form: requires alpha = 2, theta = 0");
  }
  switch (spec.clock.kind) {
    case ClockKind::poisson_drift:
      return 2.0 * t * (spec.clock.a + spec.clock.lambda);
    case ClockKind::gamma_drift:
      return 2.0 * t * (spec.clock.a + spec.clock.mu / spec.clock.rho);
    case ClockKind::birth_drift:
      return 2.0 * (spec.clock.a * t + birth_clock_mean(spec.clock.lambda, t));
  }
  throw DomainError("variance_closed_form: unknown clock kind");
}

double birth_variance_printed(double a, double lambda, double t) {
  return 2.0 * (a * t + 1.0 / lambda);
}

namespace {

// Cubic Hermite interpolation on a uniform table with central-difference
// slopes; callers keep arguments inside the table.
class DensityTable {
 public:
  DensityTable(const StableParams& p, double x_half, int n) : p_(p) {
    const Grid grid(-x_half, x_half, n);
    DensityOptions opts;
    table_ = stable_density_fft(p, 1.0, grid, opts);
    x0_ = grid.x_min;
    h_ = grid.dx();
  }

  double operator()(double x) const {
    const auto& v = table_.values;
    const double u = (x - x0_) / h_;
    const int i = static_cast<int>(std::floor(u));
    if (i < 1 || i + 2 >= static_cast<int>(v.size())) {
      // Beyond the table: unit-time power tail.
      const double c = x >= 0.0 ? stable_tail_amplitude_right(p_)
                                : stable_tail_amplitude_left(p_);
      return c * std::pow(std::abs(x), -1.0 - p_.alpha);
    }
    const double s = u - i;
    const double m0 = 0.5 * (v[i + 1] - v[i - 1]);
    const double m1 = 0.5 * (v[i + 2] - v[i]);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v[i] + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * v[i + 1] + (s3 - s2) * m1;
  }

 private:
  StableParams p_;
  DensityResult table_{Grid(-1, 1, 8), {}, std::nullopt, 1.0};
  double x0_ = 0.0;
  double h_ = 1.0;
};

double stable_levy_density(const StableParams& p, double x) {
  const double c = x > 0.0 ? stable_tail_amplitude_right(p)
                           : stable_tail_amplitude_left(p);
  return c * std::pow(std::abs(x), -1.0 - p.alpha);
}

}  // namespace

LevyTriplet levy_triplet(const ProcessSpec& spec, std::span<const double> xs) {
  spec.validate();
  if (spec.clock.kind == ClockKind::birth_drift) {
    throw DomainError("levy_triplet: the birth-clock process is Markov but "
                      "not Levy");
  }
  if (xs.empty()) throw DomainError("levy_triplet: empty grid");
  double max_abs = 0.0;
  for (double x : xs) {
    if (x == 0.0) throw DomainError("levy_triplet: grid must exclude 0");
    max_abs = std::max(max_abs, std::abs(x));
  }

  LevyTriplet out;
  out.xs.assign(xs.begin(), xs.end());
  out.nu.resize(xs.size());
  const double alpha = spec.stable.alpha;
  const double a = spec.clock.a;

  if (spec.clock.kind == ClockKind::poisson_drift) {
    const double lambda = spec.clock.lambda;
    if (alpha == 2.0) {
      // As printed for the Brownian case.
      for (std::size_t i = 0; i < xs.size(); ++i) {
        out.nu[i] = lambda * std::exp(-0.5 * xs[i] * xs[i]) / std::sqrt(2.0 * M_PI);
      }
      out.diffusion_A = a;
      out.drift_gamma = 0.0;
      return out;
    }
    const double x_half = std::max(4.0 * max_abs, 64.0);
    const DensityTable ptab(spec.stable, x_half, 1 << 15);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out.nu[i] = a * stable_levy_density(spec.stable, xs[i]) + lambda * ptab(xs[i]);
    }
    out.diffusion_A = 0.0;
    out.drift_gamma =
        a * integrate([&](double x) { return x * ptab(x); }, -1.0, 1.0, 1e-9);
    return out;
  }

  // Gamma clock.
  if (spec.stable.theta != 0.0) {
    throw DomainError("levy_triplet: gamma clock requires theta = 0");
  }
  const double mu = spec.clock.mu;
  const double rho = spec.clock.rho;
  if (alpha == 2.0) {
    // Exponential-tilted mixing integral in closed form; the decay rate
    // consistent with the symbol is sqrt(rho) (the verify command reports
    // the alternative).
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out.nu[i] = mu / std::abs(xs[i]) * std::exp(-std::sqrt(rho) * std::abs(xs[i]));
    }
    out.diffusion_A = a;
    out.drift_gamma = 0.0;
    return out;
  }
  const double x_half = std::max(4.0 * max_abs, 64.0);
  const DensityTable ptab(spec.stable, x_half, 1 << 15);
  const double inv_alpha = 1.0 / alpha;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    // The density table is piecewise cubic (C^1), which caps what the
    // double-exponential rule can resolve; tabulation accuracy is set by
    // the table itself, not the quadrature tolerance.
    const double mixed = integrate_to_inf(
        [&](double s) {
          if (s <= 0.0) return 0.0;
          const double scale = std::pow(s, -inv_alpha);
          return std::pow(s, -1.0) * std::exp(-rho * s) * scale * ptab(x * scale);
        },
        0.0, 1e-7);
    out.nu[i] = a * stable_levy_density(spec.stable, x) + mu * mixed;
  }
  out.diffusion_A = 0.0;
  out.drift_gamma = 0.0;  // symmetric mixing law
  return out;
}

namespace {

double poisson_moment_series(double lambda_t, double a_t, double power) {
  double w = std::exp(-lambda_t);
  double sum = 0.0;
  for (long k = 0; k < 100000; ++k) {
    sum += w * std::pow(a_t + static_cast<double>(k), power);
    w *= lambda_t / static_cast<double>(k + 1);
    if (k > lambda_t + 10 &&
        w * std::pow(a_t + static_cast<double>(k + 1), std::max(power, 0.0)) <
            1e-16 * std::max(sum, 1e-300)) {
      return sum;
    }
  }
  throw NumericalError("frac_moment: Poisson series did not converge");
}

double birth_moment_series(double lambda, double t, double a_t, double power) {
  const double p = std::exp(-lambda * t);
  double w = p;
  double sum = 0.0;
  for (long k = 1; k < 2000000; ++k) {
    sum += w * std::pow(a_t + static_cast<double>(k), power);
    const double remaining = w * (1.0 - p) / std::max(p, 1e-300);
    if (remaining * std::pow(a_t + static_cast<double>(k) + 1.0 / std::max(p, 1e-12),
                             std::max(power, 0.0)) <
        1e-14 * std::max(sum, 1e-300)) {
      return sum;
    }
    w *= 1.0 - p;
  }
  throw NumericalError("frac_moment: birth series did not converge");
}

}  // namespace

double frac_moment_gamma_quadrature(const ProcessSpec& spec, double gamma_order,
                                    double t) {
  const double alpha = spec.stable.alpha;
  const double a = spec.clock.a, mu = spec.clock.mu, rho = spec.clock.rho;
  const double m = stable_abs_moment(alpha, gamma_order);
  if (mu == 0.0) return m * std::pow(a * t, gamma_order / alpha);
  const double shape = mu * t;
  const double log_norm = shape * std::log(rho) - log_gamma(shape);
  return m * integrate_to_inf(
                 [&](double s) {
                   if (s <= 0.0) return 0.0;
                   return std::pow(a * t + s, gamma_order / alpha) *
                          std::exp(log_norm + (shape - 1.0) * std::log(s) -
                                   rho * s);
                 },
                 0.0, 1e-10);
}

double frac_moment_gamma_wright(const ProcessSpec& spec, double gamma_order,
                                double t) {
  const double alpha = spec.stable.alpha;
  const double g = gamma_order;
  const double a = spec.clock.a, mu = spec.clock.mu, rho = spec.clock.rho;
  if (mu == 0.0) {
    return stable_abs_moment(alpha, g) * std::pow(a * t, g / alpha);
  }
  const double ga = g / alpha;
  if (ga <= 0.0 && ga == std::floor(ga)) {
    throw NumericalError("frac_moment: closed form singular at integer g/alpha");
  }
  // Constant of the series form: g 2^g Gamma(1-g/a) Gamma((1+g)/2)
  // Gamma(g/a) / (a sqrt(pi) Gamma(1-g/2) Gamma(mu t) rho^{g/a}).
  const SignedLogGamma l1 = signed_log_gamma(1.0 - ga);
  const SignedLogGamma l2 = signed_log_gamma(0.5 * (1.0 + g));
  const SignedLogGamma l3 = signed_log_gamma(ga);
  const SignedLogGamma l4 = signed_log_gamma(1.0 - 0.5 * g);
  const double log_mag = g == 0.0 ? 0.0 : std::log(std::abs(g));
  const double sign = (g >= 0.0 ? 1.0 : -1.0) * l1.sign * l2.sign * l3.sign * l4.sign;
  const double c =
      sign * std::exp(log_mag + g * std::log(2.0) + l1.log_abs + l2.log_abs +
                      l3.log_abs - l4.log_abs - 0.5 * std::log(M_PI) -
                      std::log(alpha) - log_gamma(mu * t) - ga * std::log(rho));
  const double w = wright_1psi1({ga + mu * t, -1.0, ga + 1.0, -1.0}, rho * a * t);
  return c * w;
}

double frac_moment(const ProcessSpec& spec, double gamma_order, double t) {
  spec.validate();
  const double alpha = spec.stable.alpha;
  if (!(gamma_order > -1.0) || !(gamma_order < alpha)) {
    throw DomainError("frac_moment: order must lie in (-1, alpha)");
  }
  if (gamma_order == 0.0) return 1.0;
  const double a = spec.clock.a;
  const double power = gamma_order / alpha;

  switch (spec.clock.kind) {
    case ClockKind::poisson_drift: {
      if (gamma_order < 0.0 && a == 0.0) {
        throw NumericalError("frac_moment: diverges (clock atom at zero)");
      }
      const double m = stable_abs_moment_skewed(spec.stable, gamma_order);
      return m * poisson_moment_series(spec.clock.lambda * t, a * t, power);
    }
    case ClockKind::birth_drift: {
      const double m = stable_abs_moment_skewed(spec.stable, gamma_order);
      return m * birth_moment_series(spec.clock.lambda, t, a * t, power);
    }
    case ClockKind::gamma_drift: {
      if (spec.stable.theta != 0.0) {
        throw DomainError("frac_moment: gamma clock requires theta = 0");
      }
      const double quad = frac_moment_gamma_quadrature(spec, gamma_order, t);
      const double wright = frac_moment_gamma_wright(spec, gamma_order, t);
      if (std::abs(wright - quad) > 1e-6 * std::abs(quad)) {
        throw NumericalError(
            "frac_moment: closed form and direct integral disagree (closed " +
            std::to_string(wright) + ", integral " + std::to_string(quad) + ")");
      }
      return wright;
    }
  }
  throw DomainError("frac_moment: unknown clock kind");
}

TailConstants tail_constant(const ProcessSpec& spec, double t) {
  spec.validate();
  const double alpha = spec.stable.alpha;
  const double theta = spec.stable.theta;
  if (!(alpha > 0.0 && alpha < 1.0) || std::abs(theta + alpha) > 1e-12) {
    throw DomainError("tail_constant: validated only for alpha in (0,1), "
                      "theta = -alpha");
  }
  const double gamma_1ma = std::exp(log_gamma(1.0 - alpha));
  switch (spec.clock.kind) {
    case ClockKind::gamma_drift:
      return {(spec.clock.a + spec.clock.mu / spec.clock.rho) * t / gamma_1ma,
              0.0};
    case ClockKind::birth_drift: {
      const double elt = std::exp(-spec.clock.lambda * t);
      return {(1.0 + spec.clock.a * t * elt) / (elt * gamma_1ma), 0.0};
    }
    case ClockKind::poisson_drift:
      throw DomainError("tail_constant: no validated constant for the Poisson "
                        "clock");
  }
  throw DomainError("tail_constant: unknown clock kind");
}

std::vector<TailEstimate> empirical_tail(std::span<const double> samples,
                                         double alpha,
                                         std::span<const double> probes) {
  if (samples.size() < 100000) {
    throw DomainError("empirical_tail: needs at least 1e5 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  // Upper decade of the order statistics: probes above the 0.9 quantile.
  const double q90 = sorted[static_cast<std::size_t>(0.9 * sorted.size())];
  const double n = static_cast<double>(sorted.size());
  std::vector<TailEstimate> out;
  out.reserve(probes.size());
  for (double x : probes) {
    if (!(x >= q90)) {
      throw DomainError("empirical_tail: probes must sit in the upper decade "
                        "of the sample order statistics");
    }
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    const double p = static_cast<double>(sorted.end() - it) / n;
    const double xa = std::pow(x, alpha);
    out.push_back({x, xa * p, xa * std::sqrt(p * (1.0 - p) / n)});
  }
  return out;
}

std::vector<double> empirical_quantiles(std::span<const double> samples,
                                        std::span<const double> qs) {
  if (samples.empty()) throw DomainError("empirical_quantiles: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw DomainError("empirical_quantiles: q must lie in [0,1]");
    }
    const std::size_t i = std::min(
        sorted.size() - 1,
        static_cast<std::size_t>(std::ceil(q * sorted.size())) -
            (q > 0.0 ? 1 : 0));
    out.push_back(sorted[i]);
  }
  return out;
}

}  // namespace fdte
