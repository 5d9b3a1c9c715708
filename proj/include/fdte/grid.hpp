#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace fdte {

/// Uniform periodic grid on [x_min, x_max) with its discrete-transform dual.
/// Frequency index k maps to xi_k = 2 pi k~ / (n dx), k~ = k for k < n/2 and
/// k - n otherwise (standard FFT bin order).
struct Grid {
  double x_min;
  double x_max;
  int n;

  Grid(double x_min, double x_max, int n);

  double length() const { return x_max - x_min; }
  double dx() const { return length() / n; }
  double dxi() const { return 2.0 * M_PI / length(); }
  double x(int j) const { return x_min + j * dx(); }
  double xi(int k) const {
    const int kk = k < n / 2 ? k : k - n;
    return kk * dxi();
  }
  // Magnitude of the boundary (Nyquist) frequency.
  double xi_boundary() const { return (n / 2) * dxi(); }

  std::vector<double> xs() const;
  std::vector<double> xis() const;  // FFT bin order
};

struct Atom {
  double weight;
  double location;
};

/// Absolutely continuous part tabulated on a grid plus an optional atom.
/// `retained_mass` records how much probability the construction kept before
/// any renormalization (mixture truncation, window capture).
struct DensityResult {
  Grid grid;
  std::vector<double> values;
  std::optional<Atom> atom;
  double retained_mass = 1.0;

  double mass() const;
  double mean() const;
  double variance() const;
};

struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeff;
};

double l1_distance(const DensityResult& a, const DensityResult& b);

}  // namespace fdte
