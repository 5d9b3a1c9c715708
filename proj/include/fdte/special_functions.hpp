#pragma once

namespace fdte {

// sin(pi x), exactly zero at integer x.
double sin_pi(double x);

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// 1/Gamma(x) on the whole real line; exactly 0 at the poles 0, -1, -2, ...
double recip_gamma(double x);

// ln|Gamma(x)| and the sign of Gamma(x) for non-pole x.
struct SignedLogGamma {
  double log_abs;
  double sign;
};
SignedLogGamma signed_log_gamma(double x);

// Gamma(a)/Gamma(b). A pole of the denominator zeroes the ratio; a pole of
// the numerator alone is an error. Both near a pole is evaluated in log
// space through the reflection formula so the pole factors cancel.
double gamma_ratio(double a, double b);

/// Parameter pair of the generalized Wright series with p = q = 1,
///   sum_j Gamma(a1 + A1 j) / Gamma(b1 + B1 j) z^j / j!.
struct WrightParams {
  double a1;
  double A1;
  double b1;
  double B1;
};

// The series above for the A1 = B1 = -1 family. Truncates once the absolute
// term drops below eps * |sum| three times in a row.
double wright_1psi1(const WrightParams& params, double z, double eps = 1e-16);

}  // namespace fdte
