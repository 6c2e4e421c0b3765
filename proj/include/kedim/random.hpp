#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace kedim {

// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seedable, splittable random stream. All randomness in a run flows from one
/// root seed; `split(i)` gives the i-th child stream, which depends only on
/// (parent seed, i) so parallel workers stay reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  Rng split(std::uint64_t index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  /// Uniform point in the closed Euclidean unit ball of R^n.
  Eigen::VectorXd unit_ball_point(Eigen::Index n) {
    Eigen::VectorXd v = unit_sphere_point(n);
    return v * std::pow(uniform(), 1.0 / static_cast<double>(n));
  }

  /// Uniform point on the unit sphere of R^n (n >= 1).
  Eigen::VectorXd unit_sphere_point(Eigen::Index n) {
    Eigen::VectorXd v(n);
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
      norm = v.norm();
    } while (norm == 0.0);
    return v / norm;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace kedim
