#include "fdte/symbols.hpp"

#include <cmath>

#include "fdte/errors.hpp"
#include "fdte/fourier.hpp"
#include "fdte/kernels.hpp"

namespace fdte {

Symbol identity_symbol() {
  return {[](double) { return std::complex<double>(1.0, 0.0); }, "identity", false};
}

Symbol rf_derivative_symbol(const StableParams& p) {
  return {[p](double xi) { return -rf_symbol(p, xi); }, "rf_derivative", false};
}

std::complex<double> exp_operator_symbol(double c, const StableParams& p,
                                         double xi) {
  return std::exp(-c * rf_symbol(p, xi));
}

Symbol exp_operator(double c, const StableParams& p) {
  return {[c, p](double xi) { return exp_operator_symbol(c, p, xi); },
          "exp_operator", false};
}

double log_operator_symbol(double c, double alpha, double xi) {
  if (!(c > 0.0)) throw DomainError("log_operator_symbol: c must be > 0");
  return -std::log1p(c * std::pow(std::abs(xi), alpha));
}

Symbol log_operator(double c, double alpha) {
  if (!(c > 0.0)) throw DomainError("log_operator: c must be > 0");
  return {[c, alpha](double xi) {
            return std::complex<double>(log_operator_symbol(c, alpha, xi), 0.0);
          },
          "log_operator", false};
}

std::complex<double> feller_integral_symbol(double nu, double gamma_idx,
                                            double xi) {
  const bool ok = (nu > 0.0 && nu < 1.0 && std::abs(gamma_idx) <= nu) ||
                  (nu > 1.0 && nu < 2.0 && std::abs(gamma_idx) <= 2.0 - nu);
  if (!ok) {
    throw DomainError("feller_integral_symbol: need |gamma| <= nu (nu in (0,1)) "
                      "or |gamma| <= 2-nu (nu in (1,2))");
  }
  if (xi == 0.0) throw DomainError("feller_integral_symbol: singular at xi = 0");
  const double ang = -0.5 * M_PI * gamma_idx * (xi > 0.0 ? 1.0 : -1.0);
  return std::pow(std::abs(xi), -nu) *
         std::complex<double>(std::cos(ang), std::sin(ang));
}

Symbol feller_integral(double nu, double gamma_idx) {
  feller_integral_symbol(nu, gamma_idx, 1.0);  // validate parameters
  return {[nu, gamma_idx](double xi) {
            return feller_integral_symbol(nu, gamma_idx, xi);
          },
          "feller_integral", true};
}

std::complex<double> weyl_integral_symbol(double xi) {
  if (xi == 0.0) throw DomainError("weyl_integral_symbol: singular at xi = 0");
  return {0.0, (xi > 0.0 ? 1.0 : -1.0) / std::abs(xi)};
}

Symbol weyl_integral() {
  return {[](double xi) { return weyl_integral_symbol(xi); }, "weyl_integral",
          true};
}

SpectralField apply_symbol(const SpectralField& field, const Symbol& sym,
                           ZeroModePolicy policy) {
  const Grid& grid = field.grid;
  std::vector<std::complex<double>> mult(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    if (k == 0 && sym.singular_at_zero) {
      mult[k] = 0.0;
      continue;
    }
    mult[k] = sym(grid.xi(k));
  }
  if (sym.singular_at_zero && policy == ZeroModePolicy::require_zero_mean) {
    if (std::abs(field.coeff[0]) > 1e-10) {
      throw DomainError("apply_symbol: singular symbol requires zero-mean input "
                        "(zero-frequency coefficient exceeds 1e-10)");
    }
  }
  SpectralField out{grid, std::vector<std::complex<double>>(grid.n)};
  kernels::ops().cmul(field.coeff.data(), mult.data(), out.coeff.data(), grid.n);
  if (sym.singular_at_zero) out.coeff[0] = 0.0;
  return out;
}

std::vector<double> apply_symbol(const Grid& grid, std::span<const double> f,
                                 const Symbol& sym, ZeroModePolicy policy,
                                 GridExtension extension) {
  if (extension == GridExtension::decaying) {
    double peak = 0.0;
    for (double v : f) peak = std::max(peak, std::abs(v));
    const double edge = std::max(std::abs(f.front()), std::abs(f.back()));
    if (peak > 0.0 && edge > 1e-12 * peak) {
      throw GridError("apply_symbol: input does not decay at the window edges");
    }
  }
  const SpectralField field = forward_transform(grid, f);
  const SpectralField result = apply_symbol(field, sym, policy);
  return inverse_transform_real(grid, result.coeff);
}

}  // namespace fdte
