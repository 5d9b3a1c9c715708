#pragma once

#include <complex>

#include "fdte/rng.hpp"

namespace fdte {

enum class ClockKind { poisson_drift, gamma_drift, birth_drift };

/// Random clock: Poisson process with drift (a, lambda), gamma subordinator
/// with drift (a, mu, rho), or linear-birth (Yule-Furry) process with drift
/// (a, lambda). The birth clock starts from one progenitor, so its value is
/// always >= a t + 1.
struct TimeChangeSpec {
  ClockKind kind;
  double a = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double rho = 1.0;

  static TimeChangeSpec poisson(double a, double lambda);
  static TimeChangeSpec gamma(double a, double mu, double rho);
  static TimeChangeSpec birth(double a, double lambda);

  void validate() const;
};

// Gamma subordinator marginal density at time t. Returns 0 for x < 0; at
// x = 0 the limit convention is 0 (mu t > 1), rho (mu t = 1), +inf (mu t < 1).
double gamma_density(double mu, double rho, double t, double x);

// P(B(t) = k | B(0) = 1) = e^{-lambda t} (1 - e^{-lambda t})^{k-1}, k >= 1.
double yule_pmf(double lambda, double t, long k);

// E exp(-s clock(t)) for Re(s) >= 0. For the birth clock this is the full
// transform at time t (the process is not Levy).
std::complex<double> clock_laplace_transform(const TimeChangeSpec& spec,
                                             std::complex<double> s, double t);

// One draw of clock(t). The mu = 0 gamma clock degenerates to a t exactly.
double sample_clock(const TimeChangeSpec& spec, double t, RngStream& rng);

}  // namespace fdte
