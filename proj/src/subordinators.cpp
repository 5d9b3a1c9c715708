#include "fdte/subordinators.hpp"

#include <cmath>
#include <limits>

#include "fdte/errors.hpp"
#include "fdte/special_functions.hpp"

namespace fdte {

TimeChangeSpec TimeChangeSpec::poisson(double a, double lambda) {
  TimeChangeSpec s{ClockKind::poisson_drift, a, lambda, 0.0, 1.0};
  s.validate();
  return s;
}

TimeChangeSpec TimeChangeSpec::gamma(double a, double mu, double rho) {
  TimeChangeSpec s{ClockKind::gamma_drift, a, 0.0, mu, rho};
  s.validate();
  return s;
}

TimeChangeSpec TimeChangeSpec::birth(double a, double lambda) {
  TimeChangeSpec s{ClockKind::birth_drift, a, lambda, 0.0, 1.0};
  s.validate();
  return s;
}

void TimeChangeSpec::validate() const {
  if (!(a >= 0.0)) throw DomainError("TimeChangeSpec: drift a must be >= 0");
  switch (kind) {
    case ClockKind::poisson_drift:
    case ClockKind::birth_drift:
      if (!(lambda > 0.0)) {
        throw DomainError("TimeChangeSpec: rate lambda must be > 0");
      }
      break;
    case ClockKind::gamma_drift:
      if (!(mu >= 0.0)) throw DomainError("TimeChangeSpec: mu must be >= 0");
      if (!(rho > 0.0)) throw DomainError("TimeChangeSpec: rho must be > 0");
      break;
  }
}

double gamma_density(double mu, double rho, double t, double x) {
  if (!(mu > 0.0) || !(rho > 0.0) || !(t > 0.0)) {
    throw DomainError("gamma_density: requires mu, rho, t > 0");
  }
  if (x < 0.0) return 0.0;
  const double shape = mu * t;
  if (x == 0.0) {
    if (shape > 1.0) return 0.0;
    if (shape == 1.0) return rho;
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(shape * std::log(rho) + (shape - 1.0) * std::log(x) -
                  rho * x - log_gamma(shape));
}

double yule_pmf(double lambda, double t, long k) {
  if (k < 1) throw DomainError("yule_pmf: k must be >= 1");
  if (!(lambda > 0.0) || t < 0.0) {
    throw DomainError("yule_pmf: requires lambda > 0, t >= 0");
  }
  const double p = std::exp(-lambda * t);
  if (k == 1) return p;
  return p * std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

std::complex<double> clock_laplace_transform(const TimeChangeSpec& spec,
                                             std::complex<double> s, double t) {
  spec.validate();
  if (s.real() < 0.0) {
    throw DomainError("clock_laplace_transform: requires Re(s) >= 0");
  }
  const std::complex<double> drift = std::exp(-s * (spec.a * t));
  switch (spec.kind) {
    case ClockKind::poisson_drift:
      return drift * std::exp(-spec.lambda * t * (1.0 - std::exp(-s)));
    case ClockKind::gamma_drift:
      if (spec.mu == 0.0) return drift;
      return drift * std::pow(1.0 + s / spec.rho, -spec.mu * t);
    case ClockKind::birth_drift: {
      const double q = -std::expm1(-spec.lambda * t);  // 1 - e^{-lambda t}
      const std::complex<double> denom = 1.0 - std::exp(-s) * q;
      if (std::abs(denom) < 1e-14) {
        throw NumericalError("clock_laplace_transform: birth transform singular");
      }
      return drift * std::exp(-s - spec.lambda * t) / denom;
    }
  }
  throw DomainError("clock_laplace_transform: unknown clock kind");
}

double sample_clock(const TimeChangeSpec& spec, double t, RngStream& rng) {
  spec.validate();
  if (t < 0.0) throw DomainError("sample_clock: t must be >= 0");
  const double drift = spec.a * t;
  switch (spec.kind) {
    case ClockKind::poisson_drift:
      return drift + static_cast<double>(rng.poisson(spec.lambda * t));
    case ClockKind::gamma_drift:
      if (spec.mu == 0.0 || t == 0.0) return drift;
      return drift + rng.gamma(spec.mu * t, spec.rho);
    case ClockKind::birth_drift:
      return drift +
             static_cast<double>(rng.geometric_one_based(std::exp(-spec.lambda * t)));
  }
  throw DomainError("sample_clock: unknown clock kind");
}

}  // namespace fdte
