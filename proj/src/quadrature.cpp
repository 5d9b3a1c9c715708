#include "fdte/quadrature.hpp"

#include <cmath>
#include <limits>

#include "fdte/errors.hpp"

namespace fdte {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const Integrand& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double err = left + right - whole;
  if (std::abs(err) <= 15.0 * tol || depth <= 0) {
    return left + right + err / 15.0;
  }
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const Integrand& f, double a, double b, double tol,
                 int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
    throw NumericalError("integrate: non-finite integrand value");
  }
  const double whole = simpson(a, b, fa, fm, fb);
  return adapt(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

namespace {

// Level-doubling driver for the double-exponential rules. Once the
// level-to-level change meets the tolerance, one extra level is taken.
template <class Eval>
double de_levels(Eval eval, double t_max, double tol) {
  double h = 1.0;
  double sum = eval(0.0);
  for (double t = h; t <= t_max; t += h) sum += eval(t) + eval(-t);
  double prev = sum * h;
  bool converged = false;
  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= t_max; t += 2.0 * h) add += eval(t) + eval(-t);
    sum += add;
    const double cur = sum * h;
    if (converged) return cur;
    if (level >= 3 && std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) {
      converged = true;  // refine once more, then return
    }
    prev = cur;
  }
  if (converged) return prev;
  throw NumericalError("quadrature: tanh-sinh/exp-sinh did not converge");
}

}  // namespace

double integrate_singular(const Integrand& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double r = 0.5 * (b - a);
  auto eval = [&](double t) -> double {
    const double u = 0.5 * M_PI * std::sinh(t);
    const double au = std::abs(u);
    // Distance to the nearer endpoint, kept accurate down to denormals:
    // r (1 - tanh|u|) = 2r / (1 + e^{2|u|}).
    const double d = 2.0 * r / (1.0 + std::exp(2.0 * au));
    if (d == 0.0) return 0.0;
    const double x = u >= 0.0 ? b - d : a + d;
    const double sech = 2.0 * std::exp(-au) / (1.0 + std::exp(-2.0 * au));
    const double w = r * 0.5 * M_PI * std::cosh(t) * sech * sech;
    if (w == 0.0 || !std::isfinite(w)) return 0.0;
    const double v = f(x);
    if (!std::isfinite(v)) return 0.0;  // endpoint overshoot in floating point
    return w * v;
  };
  return de_levels(eval, 3.5, tol);
}

double integrate_to_inf(const Integrand& f, double a, double tol) {
  auto eval = [&](double t) -> double {
    const double e = std::exp(0.5 * M_PI * std::sinh(t));
    if (e == 0.0 || !std::isfinite(e)) return 0.0;
    const double w = e * 0.5 * M_PI * std::cosh(t);
    if (w == 0.0 || !std::isfinite(w)) return 0.0;
    const double v = f(a + e);
    if (!std::isfinite(v)) return 0.0;
    return w * v;
  };
  return de_levels(eval, 4.75, tol);
}

}  // namespace fdte
