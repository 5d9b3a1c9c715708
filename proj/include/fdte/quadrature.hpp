#pragma once

#include <functional>

namespace fdte {

using Integrand = std::function<double(double)>;

// Adaptive Simpson on a finite interval; integrand must be finite on [a,b].
double integrate(const Integrand& f, double a, double b, double tol = 1e-10,
                 int max_depth = 48);

// Tanh-sinh rule on (a,b); tolerates integrable endpoint singularities.
double integrate_singular(const Integrand& f, double a, double b,
                          double tol = 1e-10);

// Exp-sinh rule on (a, +inf) for integrands decaying at infinity.
double integrate_to_inf(const Integrand& f, double a, double tol = 1e-10);

}  // namespace fdte
