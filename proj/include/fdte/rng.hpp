#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fdte {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// One random stream. Monte Carlo fans out over independent streams derived
/// from a master seed; results are reproducible for fixed (seed, workers).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(scramble(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Strictly inside (0,1).
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double gamma(double shape, double rate) {
    std::gamma_distribution<double> d(shape, 1.0 / rate);
    return d(gen_);
  }

  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean <= 60.0) {
      // Single-uniform inversion; couples monotonically across means.
      const double u = uniform();
      double p = std::exp(-mean);
      double cum = p;
      long k = 0;
      while (u > cum && k < 4096) {
        ++k;
        p *= mean / static_cast<double>(k);
        cum += p;
      }
      return k;
    }
    std::poisson_distribution<long> d(mean);
    return d(gen_);
  }

  // Geometric on {1,2,...} with P(K=k) = p(1-p)^{k-1}.
  long geometric_one_based(double success_p) {
    if (success_p >= 1.0) return 1;
    const double k = std::ceil(std::log(uniform()) / std::log1p(-success_p));
    return k < 1.0 ? 1 : static_cast<long>(k);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  static std::uint64_t scramble(std::uint64_t seed) {
    std::uint64_t s = seed;
    return splitmix64(s);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline RngStream worker_stream(std::uint64_t master_seed, std::uint64_t worker) {
  std::uint64_t s = master_seed;
  std::uint64_t mix = splitmix64(s);
  for (std::uint64_t i = 0; i <= worker; ++i) mix = splitmix64(s);
  return RngStream(mix);
}

}  // namespace fdte
