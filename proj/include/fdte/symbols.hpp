#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fdte/grid.hpp"
#include "fdte/stable.hpp"

namespace fdte {

/// Fourier multiplier with a label. Symbols singular at xi = 0 are flagged;
/// applying one requires a zero-mean input (or an explicit zero-mode policy).
struct Symbol {
  std::function<std::complex<double>(double)> eval;
  std::string label;
  bool singular_at_zero = false;

  std::complex<double> operator()(double xi) const { return eval(xi); }
};

Symbol identity_symbol();

// Symbol of the derivative itself: -psi_{alpha,theta}(xi).
Symbol rf_derivative_symbol(const StableParams& p);

// Fractional shift (operator exponential): symbol e^{-c psi(xi)}. For c >= 0
// the modulus never exceeds 1.
std::complex<double> exp_operator_symbol(double c, const StableParams& p,
                                         double xi);
Symbol exp_operator(double c, const StableParams& p);

// Fractional logarithm: symbol -ln(1 + c |xi|^alpha), c > 0.
double log_operator_symbol(double c, double alpha, double xi);
Symbol log_operator(double c, double alpha);

// Feller integral: |xi|^{-nu} e^{-i pi gamma sign(xi)/2}; needs |gamma| <= nu
// for nu in (0,1) or |gamma| <= 2-nu for nu in (1,2). Singular at xi = 0.
std::complex<double> feller_integral_symbol(double nu, double gamma_idx,
                                            double xi);
Symbol feller_integral(double nu, double gamma_idx);

// Weyl integral (antiderivative from -inf): i sign(xi)/|xi|. Singular at 0.
std::complex<double> weyl_integral_symbol(double xi);
Symbol weyl_integral();

enum class ZeroModePolicy {
  require_zero_mean,  // reject unless |zero-frequency coefficient| <= 1e-10
  zero_out,           // force the zero mode to 0 regardless
};

// Gridded inputs are treated as one period of their periodic extension.
// Non-periodic data must decay below 1e-12 of its peak at the window edges;
// genuinely periodic data opts out of that check.
enum class GridExtension { decaying, periodic };

// Coefficient-wise product in frequency space. Gridded real functions are
// taken through the transform and back.
SpectralField apply_symbol(const SpectralField& field, const Symbol& sym,
                           ZeroModePolicy policy = ZeroModePolicy::require_zero_mean);
std::vector<double> apply_symbol(const Grid& grid, std::span<const double> f,
                                 const Symbol& sym,
                                 ZeroModePolicy policy = ZeroModePolicy::require_zero_mean,
                                 GridExtension extension = GridExtension::decaying);

}  // namespace fdte
