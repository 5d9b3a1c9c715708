#include "fdte/special_functions.hpp"

#include <cmath>
#include <limits>

#include "fdte/errors.hpp"

namespace fdte {

double sin_pi(double x) {
  // Reduce modulo 2 exactly, then fold into [0, 1/2] where sin is evaluated.
  double r = std::remainder(x, 2.0);  // r in [-1, 1]
  double a = std::abs(r);
  double s;
  if (a <= 0.5) {
    s = std::sin(M_PI * a);
  } else {
    s = std::sin(M_PI * (1.0 - a));
  }
  return r >= 0.0 ? s : -s;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
  return std::lgamma(x);
}

namespace {

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

}  // namespace

double recip_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 0.0) return std::exp(-std::lgamma(x));
  // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi.
  return sin_pi(x) * std::exp(std::lgamma(1.0 - x)) / M_PI;
}

SignedLogGamma signed_log_gamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw DomainError("signed_log_gamma: pole at non-positive integer");
  }
  if (x > 0.0) return {std::lgamma(x), 1.0};
  const double s = sin_pi(x);
  return {std::log(M_PI) - std::log(std::abs(s)) - std::lgamma(1.0 - x),
          s > 0.0 ? 1.0 : -1.0};
}

double gamma_ratio(double a, double b) {
  if (is_nonpositive_integer(b)) return 0.0;
  if (is_nonpositive_integer(a)) {
    throw NumericalError("gamma_ratio: pole in the numerator");
  }
  const SignedLogGamma la = signed_log_gamma(a);
  const SignedLogGamma lb = signed_log_gamma(b);
  return la.sign * lb.sign * std::exp(la.log_abs - lb.log_abs);
}

double wright_1psi1(const WrightParams& params, double z, double eps) {
  if (params.A1 != -1.0 || params.B1 != -1.0) {
    throw DomainError("wright_1psi1: only the A1 = B1 = -1 family is supported");
  }
  if (!std::isfinite(z)) throw DomainError("wright_1psi1: z must be finite");

  constexpr int kMaxTerms = 10000;
  double sum = 0.0;
  double z_pow_over_fact = 1.0;  // z^j / j!
  int small_in_a_row = 0;
  for (int j = 0; j < kMaxTerms; ++j) {
    const double bj = params.b1 - j;
    double term = 0.0;
    if (!is_nonpositive_integer(bj)) {
      term = gamma_ratio(params.a1 - j, bj) * z_pow_over_fact;
    }
    sum += term;
    if (!std::isfinite(sum)) {
      throw NumericalError("wright_1psi1: series overflowed");
    }
    const double scale = std::max(std::abs(sum), 1e-300);
    if (std::abs(term) < eps * scale) {
      if (++small_in_a_row >= 3) return sum;
    } else {
      small_in_a_row = 0;
    }
    z_pow_over_fact *= z / (j + 1);
  }
  throw NumericalError("wright_1psi1: series did not meet the stopping rule");
}

}  // namespace fdte
