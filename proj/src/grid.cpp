#include "fdte/grid.hpp"

#include <cmath>

#include "fdte/errors.hpp"

namespace fdte {

Grid::Grid(double x_min_, double x_max_, int n_)
    : x_min(x_min_), x_max(x_max_), n(n_) {
  if (!(x_max > x_min)) throw DomainError("Grid: x_max must exceed x_min");
  if (n < 8 || (n & (n - 1)) != 0) {
    throw DomainError("Grid: n must be a power of two, at least 8");
  }
}

std::vector<double> Grid::xs() const {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = x(j);
  return v;
}

std::vector<double> Grid::xis() const {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = xi(k);
  return v;
}

double DensityResult::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  s *= grid.dx();
  if (atom) s += atom->weight;
  return s;
}

double DensityResult::mean() const {
  double s = 0.0;
  for (int j = 0; j < grid.n; ++j) s += grid.x(j) * values[j];
  s *= grid.dx();
  if (atom) s += atom->weight * atom->location;
  return s;
}

double DensityResult::variance() const {
  const double m = mean();
  double s = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const double d = grid.x(j) - m;
    s += d * d * values[j];
  }
  s *= grid.dx();
  if (atom) {
    const double d = atom->location - m;
    s += atom->weight * d * d;
  }
  return s;
}

double l1_distance(const DensityResult& a, const DensityResult& b) {
  if (a.grid.n != b.grid.n) throw DomainError("l1_distance: grid mismatch");
  double s = 0.0;
  for (int j = 0; j < a.grid.n; ++j) s += std::abs(a.values[j] - b.values[j]);
  s *= a.grid.dx();
  const double wa = a.atom ? a.atom->weight : 0.0;
  const double wb = b.atom ? b.atom->weight : 0.0;
  s += std::abs(wa - wb);
  return s;
}

}  // namespace fdte
