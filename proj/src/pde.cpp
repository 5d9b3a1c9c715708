#include "fdte/pde.hpp"

#include <algorithm>
#include <cmath>

#include "fdte/errors.hpp"
#include "fdte/fourier.hpp"
#include "fdte/kernels.hpp"

namespace fdte {

namespace {

using cplx = std::complex<double>;

std::vector<cplx> ic_spectrum(const Grid& grid, const InitialCondition& ic,
                              const StableParams& p) {
  if (std::holds_alternative<DeltaAtOrigin>(ic)) {
    return std::vector<cplx>(grid.n, cplx(1.0, 0.0));
  }
  if (std::holds_alternative<StableDensityAtUnitTime>(ic)) {
    std::vector<double> xi = grid.xis();
    std::vector<cplx> psi(grid.n), out(grid.n);
    rf_symbol_grid(p, xi, psi);
    kernels::ops().exp_scale(psi.data(), 1.0, out.data(), grid.n);
    return out;
  }
  const auto& tab = std::get<TabulatedIc>(ic);
  if (static_cast<int>(tab.values.size()) != grid.n) {
    throw DomainError("SolveConfig: tabulated initial condition size mismatch");
  }
  double peak = 0.0;
  for (double v : tab.values) peak = std::max(peak, std::abs(v));
  const double edge =
      std::max(std::abs(tab.values.front()), std::abs(tab.values.back()));
  if (peak > 0.0 && edge > 1e-12 * peak) {
    throw GridError("SolveConfig: initial condition does not decay at the "
                    "window edges");
  }
  return forward_transform(grid, tab.values).coeff;
}

DensityResult invert_solution(const Grid& grid, std::span<const cplx> coeff) {
  double peak = 0.0;
  for (const cplx& c : coeff) peak = std::max(peak, std::abs(c));
  if (peak > 0.0 && std::abs(coeff[grid.n / 2]) > 1e-8 * peak) {
    throw GridError("solver: solution spectrum does not decay at the boundary "
                    "frequency");
  }
  std::vector<double> values = inverse_transform_real(grid, coeff);
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
  return DensityResult{grid, std::move(values), std::nullopt, 1.0};
}

void validate_times(const SolveConfig& cfg, bool stepper) {
  if (cfg.t_final < 0.0) throw DomainError("SolveConfig: t_final must be >= 0");
  if (stepper) {
    if (!(cfg.dt > 0.0)) throw DomainError("SolveConfig: dt must be > 0");
    if (cfg.t_final > 0.0 && cfg.dt > cfg.t_final) {
      throw DomainError("SolveConfig: dt must not exceed t_final");
    }
  }
}

// -a psi - lambda (1 - e^{-psi}); the solution multiplier is exp(eta t).
std::vector<cplx> exp_equation_exponent(const Grid& grid, const StableParams& p,
                                        double a, double lambda) {
  std::vector<double> xi = grid.xis();
  std::vector<cplx> psi(grid.n), e_psi(grid.n), eta(grid.n);
  rf_symbol_grid(p, xi, psi);
  kernels::ops().exp_scale(psi.data(), 1.0, e_psi.data(), grid.n);
  for (int k = 0; k < grid.n; ++k) {
    eta[k] = -a * psi[k] - lambda * (1.0 - e_psi[k]);
  }
  return eta;
}

std::vector<cplx> log_equation_exponent(const Grid& grid, double alpha, double a,
                                        double mu, double rho) {
  std::vector<cplx> eta(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    const double m = std::pow(std::abs(grid.xi(k)), alpha);
    eta[k] = -a * m - mu * std::log1p(m / rho);
  }
  return eta;
}

DensityResult propagate_exact(const Grid& grid, std::span<const cplx> spectrum0,
                              std::span<const cplx> eta, double t) {
  std::vector<cplx> neg_eta(grid.n), mult(grid.n), coeff(grid.n);
  for (int k = 0; k < grid.n; ++k) neg_eta[k] = -eta[k];
  kernels::ops().exp_scale(neg_eta.data(), t, mult.data(), grid.n);
  kernels::ops().cmul(spectrum0.data(), mult.data(), coeff.data(), grid.n);
  return invert_solution(grid, coeff);
}

}  // namespace

DensityResult solve_exp_equation(const StableParams& p, double a, double lambda,
                                 const SolveConfig& cfg) {
  if (a < 0.0) throw DomainError("solve_exp_equation: a must be >= 0");
  if (!(lambda > 0.0)) throw DomainError("solve_exp_equation: lambda must be > 0");
  validate_times(cfg, false);
  const auto spectrum0 = ic_spectrum(cfg.grid, cfg.ic, p);
  const auto eta = exp_equation_exponent(cfg.grid, p, a, lambda);
  return propagate_exact(cfg.grid, spectrum0, eta, cfg.t_final);
}

DensityResult solve_log_equation(double alpha, double a, double mu, double rho,
                                 const SolveConfig& cfg) {
  if (a < 0.0) throw DomainError("solve_log_equation: a must be >= 0");
  if (!(mu > 0.0)) throw DomainError("solve_log_equation: mu must be > 0");
  if (!(rho > 0.0)) throw DomainError("solve_log_equation: rho must be > 0");
  validate_times(cfg, false);
  const StableParams p(alpha, 0.0);
  const auto spectrum0 = ic_spectrum(cfg.grid, cfg.ic, p);
  const auto eta = log_equation_exponent(cfg.grid, alpha, a, mu, rho);
  return propagate_exact(cfg.grid, spectrum0, eta, cfg.t_final);
}

DensityResult step_operator_equation(const StableParams& p, double a,
                                     const EquationKind& eq,
                                     const SolveConfig& cfg) {
  if (a < 0.0) throw DomainError("step_operator_equation: a must be >= 0");
  validate_times(cfg, true);
  const Grid& grid = cfg.grid;

  std::vector<cplx> eta;
  if (const auto* e = std::get_if<ExpEquation>(&eq)) {
    if (!(e->lambda > 0.0)) {
      throw DomainError("step_operator_equation: lambda must be > 0");
    }
    eta = exp_equation_exponent(grid, p, a, e->lambda);
  } else {
    const auto& l = std::get<LogEquation>(eq);
    if (!(l.mu > 0.0) || !(l.rho > 0.0)) {
      throw DomainError("step_operator_equation: mu, rho must be > 0");
    }
    eta = log_equation_exponent(grid, p.alpha, a, l.mu, l.rho);
  }

  // Spatial state; each stage applies the generator symbol spectrally.
  std::vector<cplx> coeff0 = ic_spectrum(grid, cfg.ic, p);
  std::vector<double> u = inverse_transform_real(grid, coeff0);

  Dft dft(grid.n);
  const bool alternating =
      std::abs(grid.x_min + 0.5 * grid.length()) < 1e-14 * grid.length();
  auto apply_generator = [&](const std::vector<double>& in,
                             std::vector<double>& out) {
    for (int j = 0; j < grid.n; ++j) dft.in()[j] = in[j];
    dft.execute_backward();
    // Phases from the x offset cancel in the round trip; multiply bin-wise.
    for (int k = 0; k < grid.n; ++k) dft.in()[k] = dft.out()[k] * eta[k];
    dft.execute_forward();
    const double scale = 1.0 / grid.n;
    for (int j = 0; j < grid.n; ++j) out[j] = dft.out()[j].real() * scale;
  };
  (void)alternating;

  const double linf0 =
      std::abs(*std::max_element(u.begin(), u.end(), [](double x, double y) {
        return std::abs(x) < std::abs(y);
      }));

  const long steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-12));
  std::vector<double> k1(grid.n), k2(grid.n), k3(grid.n), k4(grid.n), tmp(grid.n);
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    const double h = std::min(cfg.dt, cfg.t_final - t);
    apply_generator(u, k1);
    for (int j = 0; j < grid.n; ++j) tmp[j] = u[j] + 0.5 * h * k1[j];
    apply_generator(tmp, k2);
    for (int j = 0; j < grid.n; ++j) tmp[j] = u[j] + 0.5 * h * k2[j];
    apply_generator(tmp, k3);
    for (int j = 0; j < grid.n; ++j) tmp[j] = u[j] + h * k3[j];
    apply_generator(tmp, k4);
    for (int j = 0; j < grid.n; ++j) {
      u[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    t += h;
    double linf = 0.0;
    for (double v : u) linf = std::max(linf, std::abs(v));
    if (linf > 10.0 * std::max(linf0, 1e-300)) {
      throw NumericalError("step_operator_equation: unstable (norm grew 10x); "
                           "reduce dt");
    }
  }

  std::vector<double> values = u;
  double signed_mass = 0.0, positive_mass = 0.0;
  for (double& v : values) {
    signed_mass += v;
    if (v < 0.0) v = 0.0;
    positive_mass += v;
  }
  if (positive_mass > 0.0 && signed_mass > 0.0) {
    const double sc = signed_mass / positive_mass;
    for (double& v : values) v *= sc;
  }
  return DensityResult{grid, std::move(values), std::nullopt, 1.0};
}

namespace {

// 4th-order first derivative on a uniform panel [lo, hi] (inclusive), with
// one-sided stencils at the panel ends. Panels never straddle xi = 0, where
// |xi|^alpha kinks.
void d4_panel(std::span<const cplx> u, int lo, int hi, double h,
              std::span<cplx> out) {
  const double inv = 1.0 / (12.0 * h);
  auto f = [&](int i) { return u[i]; };
  for (int i = lo; i <= hi; ++i) {
    if (i - lo >= 2 && hi - i >= 2) {
      out[i] = (f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2)) * inv;
    } else if (i - lo == 0) {
      out[i] = (-25.0 * f(i) + 48.0 * f(i + 1) - 36.0 * f(i + 2) +
                16.0 * f(i + 3) - 3.0 * f(i + 4)) * inv;
    } else if (i - lo == 1) {
      out[i] = (-3.0 * f(i - 1) - 10.0 * f(i) + 18.0 * f(i + 1) -
                6.0 * f(i + 2) + f(i + 3)) * inv;
    } else if (hi - i == 1) {
      out[i] = (3.0 * f(i + 1) + 10.0 * f(i) - 18.0 * f(i - 1) +
                6.0 * f(i - 2) - f(i - 3)) * inv;
    } else {
      out[i] = (25.0 * f(i) - 48.0 * f(i - 1) + 36.0 * f(i - 2) -
                16.0 * f(i - 3) + 3.0 * f(i - 4)) * inv;
    }
  }
}

}  // namespace

BirthCharfnResult evolve_birth_charfn(double alpha, double theta, double a,
                                      double lambda, const Grid& grid,
                                      double t_final, double dt,
                                      double edge_tol) {
  if (!(alpha > 1.0) || alpha > 2.0) {
    throw DomainError("evolve_birth_charfn: alpha must lie in (1, 2]");
  }
  if (a < 0.0 || !(lambda > 0.0) || !(dt > 0.0) || t_final < 0.0) {
    throw DomainError("evolve_birth_charfn: bad parameters");
  }
  const int n = grid.n;
  const int origin = n / 2;
  const double h = grid.dxi();

  // Ascending frequency array; node `origin` sits at xi = 0.
  std::vector<double> xi(n);
  for (int j = 0; j < n; ++j) xi[j] = (j - origin) * h;

  std::vector<cplx> psi(n);
  const double half = 0.5 * M_PI * theta;
  kernels::ops().rf_psi(xi.data(), alpha, std::cos(half), std::sin(half),
                        psi.data(), n);
  std::vector<cplx> e_psi(n);
  kernels::ops().exp_scale(psi.data(), 1.0, e_psi.data(), n);

  // u~(xi, 0) = e^{-psi}; it must vanish at the window edges.
  std::vector<cplx> u(e_psi);
  if (std::abs(u.front()) > edge_tol || std::abs(u.back()) > edge_tol) {
    throw GridError("evolve_birth_charfn: initial data does not decay at the "
                    "frequency-window edges");
  }

  // Multiplier of F{x u}: (lambda/alpha)(1 - e^{-psi}) |xi|^{1-alpha}
  // e^{-i sign(xi)(theta-1) pi/2}; continuous limit 0 at xi = 0.
  std::vector<cplx> integral_coef(n);
  for (int j = 0; j < n; ++j) {
    if (j == origin) {
      integral_coef[j] = 0.0;
      continue;
    }
    const double ang = -0.5 * M_PI * (theta - 1.0) * (xi[j] > 0.0 ? 1.0 : -1.0);
    integral_coef[j] = lambda / alpha * (1.0 - e_psi[j]) *
                       std::pow(std::abs(xi[j]), 1.0 - alpha) *
                       cplx(std::cos(ang), std::sin(ang));
  }

  std::vector<cplx> du(n), rhs(n), k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto eval_rhs = [&](double t, const std::vector<cplx>& state,
                      std::vector<cplx>& out) {
    d4_panel(state, 0, origin, h, du);
    d4_panel(state, origin, n - 1, h, du);
    for (int j = 0; j < n; ++j) {
      if (j == origin) {
        out[j] = 0.0;  // u~(0,t) = 1 for all t
        continue;
      }
      const cplx drift = a * (-psi[j] + lambda * t * (1.0 - e_psi[j]));
      const cplx fxu = cplx(0.0, -1.0) * du[j];
      out[j] = drift * state[j] + integral_coef[j] * fxu;
    }
  };

  const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
  double t = 0.0;
  for (long s = 0; s < steps; ++s) {
    const double step = std::min(dt, t_final - t);
    eval_rhs(t, u, k1);
    for (int j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * step * k1[j];
    eval_rhs(t + 0.5 * step, tmp, k2);
    for (int j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * step * k2[j];
    eval_rhs(t + 0.5 * step, tmp, k3);
    for (int j = 0; j < n; ++j) tmp[j] = u[j] + step * k3[j];
    eval_rhs(t + step, tmp, k4);
    for (int j = 0; j < n; ++j) {
      u[j] += step / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    t += step;
    double worst = 0.0;
    for (const cplx& v : u) worst = std::max(worst, std::abs(v));
    if (worst > 10.0) {
      throw NumericalError("evolve_birth_charfn: unstable (|u~| grew beyond "
                           "10); reduce dt or the frequency window");
    }
  }

  return {std::move(xi), std::move(u)};
}

DensityResult solve_nonlinear_birth(const StableParams& p, double a,
                                    double lambda, const SolveConfig& cfg) {
  const bool fractional_branch =
      p.alpha > 1.0 && p.alpha < 2.0 && std::abs(p.theta - (2.0 - p.alpha)) <= 1e-12;
  const bool weyl_branch = p.alpha == 2.0 && p.theta == 0.0;
  if (!fractional_branch && !weyl_branch) {
    throw DomainError("solve_nonlinear_birth: requires theta = 2 - alpha with "
                      "alpha in (1,2), or alpha = 2 with theta = 0");
  }
  validate_times(cfg, true);

  BirthCharfnResult evolved = evolve_birth_charfn(p.alpha, p.theta, a, lambda,
                                                  cfg.grid, cfg.t_final, cfg.dt);
  // Reorder the ascending array into transform bin order.
  const int n = cfg.grid.n;
  std::vector<cplx> coeff(n);
  for (int k = 0; k < n; ++k) {
    const int kk = k < n / 2 ? k : k - n;
    coeff[k] = evolved.u[kk + n / 2];
  }
  return invert_solution(cfg.grid, coeff);
}

BirthEquationReport verify_birth_drift_equation(double a, double lambda,
                                                std::span<const double> t_points,
                                                std::span<const double> xi_points) {
  if (a < 0.0 || !(lambda > 0.0)) {
    throw DomainError("verify_birth_drift_equation: bad parameters");
  }
  auto phi = [&](double t, double xi) -> cplx {
    const cplx num = std::exp(cplx(-lambda * t, xi + xi * a * t));
    const cplx den = 1.0 - (-std::expm1(-lambda * t)) * std::exp(cplx(0.0, xi));
    return num / den;
  };
  BirthEquationReport report;
  const double h = 1e-6;
  for (double t : t_points) {
    for (double xi : xi_points) {
      const cplx dphi = (phi(t + h, xi) - phi(t - h, xi)) / (2.0 * h);
      const cplx p = phi(t, xi);
      const cplx den = 1.0 - (-std::expm1(-lambda * t)) * std::exp(cplx(0.0, xi));
      const cplx fxq = a * t * p + p / den;  // F{x q_a}
      const cplx rhs = cplx(0.0, xi * a) * p -
                       lambda * (1.0 - std::exp(cplx(0.0, xi))) * (fxq - a * t * p);
      const double residual = std::abs(dphi - rhs);
      report.rows.push_back({t, xi, residual});
      report.max_residual = std::max(report.max_residual, residual);
    }
  }
  return report;
}

}  // namespace fdte
