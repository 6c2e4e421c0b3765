#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "kedim/errors.hpp"

namespace kedim {

/// Gamma function by the Lanczos approximation (g = 7, 9 coefficients).
/// Relative error stays below 1e-13 on [0.5, 20], which covers every
/// argument of the form 1 + N/2 used by the dimension bounds.
template <typename Scalar>
Scalar lanczos_gamma(Scalar x) {
  static constexpr std::array<double, 9> kCoeffs = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double kG = 7.0;
  const Scalar pi = std::numbers::pi_v<Scalar>;

  if (x < Scalar(0.5)) {
    // Reflection formula.
    return pi / (std::sin(pi * x) * lanczos_gamma(Scalar(1) - x));
  }
  const Scalar z = x - Scalar(1);
  Scalar sum = Scalar(kCoeffs[0]);
  for (std::size_t i = 1; i < kCoeffs.size(); ++i) {
    sum += Scalar(kCoeffs[i]) / (z + Scalar(i));
  }
  const Scalar t = z + Scalar(kG) + Scalar(0.5);
  return std::sqrt(Scalar(2) * pi) * std::pow(t, z + Scalar(0.5)) * std::exp(-t) * sum;
}

/// Volume of the unit ball in R^n: pi^{n/2} / Gamma(1 + n/2).
template <typename Scalar>
Scalar unit_ball_volume(int n) {
  if (n < 1) throw ConfigError("unit_ball_volume: dimension must be >= 1");
  const Scalar half_n = Scalar(n) / Scalar(2);
  return std::pow(std::numbers::pi_v<Scalar>, half_n) / lanczos_gamma(Scalar(1) + half_n);
}

}  // namespace kedim
