#pragma once

// Closed-form fractal-dimension bounds. Every bound is the entropy upper bound
// evaluated at eps = 1 / (4 C) for the relevant smoothing constant C; the
// direct formulas below are kept separate from that composed route so the two
// can be checked against each other.

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "kedim/ellipsoid.hpp"
#include "kedim/errors.hpp"
#include "kedim/special.hpp"
#include "kedim/spectra.hpp"

namespace kedim {

/// (lambda, beta, gamma, p) of u_t - Laplace u + g(u) = lambda u with
/// g(s) s >= beta |s|^p and |g(s1) - g(s2)| <= gamma M^{p-2} |s1 - s2| on [-M, M].
struct ReactionParams {
  double lambda = 10.0;
  double beta = 1.0;
  double gamma = 3.0;
  double p = 4.0;

  /// g(s) = beta |s|^{p-2} s, for which gamma = beta (p - 1).
  static ReactionParams canonical(double lambda, double beta, double p) {
    ReactionParams r{lambda, beta, beta * (p - 1.0), p};
    r.validate();
    return r;
  }

  void validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("reaction: lambda must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("reaction: beta must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("reaction: gamma must be positive");
    if (!(p > 2.0) || !std::isfinite(p)) throw ConfigError("reaction: p must be > 2");
  }

  double gamma_over_beta() const { return gamma / beta; }
};

/// Lipschitz constant of the smoothing map from the weak into the strong norm,
/// with the parabolic extras when they apply.
struct SmoothingConstant {
  double C = 0.0;
  std::optional<double> time_star;      // C_{gamma,beta} / lambda
  std::optional<double> c_gamma_beta;   // 1 / (2 + gamma / beta)
  std::optional<double> c_tilde;        // e^{2 Cgb} / (2 Cgb) + (Cgb / 2)(1 + gamma/beta)^2
  std::optional<double> c_tilde_cap;    // (3/4 e^{2/3} + 1/2)(1 + gamma/beta), when gamma/beta >= 1
};

struct LiYauConstants {
  double alpha = 0.0;
  double c = 0.0;
};

enum class BoundKind { EquilibriaTheorem3, EllipticCorollary, ParabolicProposition, ZelikGeneric };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::EquilibriaTheorem3:
      return "equilibria";
    case BoundKind::EllipticCorollary:
      return "elliptic_corollary";
    case BoundKind::ParabolicProposition:
      return "parabolic";
    case BoundKind::ZelikGeneric:
      return "zelik";
  }
  return "unknown";
}

struct DimensionBoundReport {
  BoundKind bound_kind = BoundKind::ZelikGeneric;
  double value = 0.0;
  std::map<std::string, double> inputs;
  std::optional<double> lower_optimality;
};

/// (ln 3 + alpha) / ln 2, the bits-per-dimension factor of the entropy bound.
template <typename Scalar>
Scalar entropy_rate_factor(Scalar alpha) {
  return (std::log(Scalar(3)) + alpha) / std::numbers::ln2_v<Scalar>;
}

/// dim_F K <= H_{1/(4C)}(B_V(0,1), H) with the entropy upper bound plugged in.
template <typename Scalar>
Scalar zelik_bound(Scalar C, Scalar c, Scalar alpha) {
  return entropy_upper_bound(c, alpha, Scalar(1) / (Scalar(4) * C));
}

/// Bound on the fractal dimension of any compact set of equilibria of
/// A u + g(u) = lambda u: ((ln 3 + alpha) / ln 2) (32 lambda / c)^{1/alpha}.
template <typename Scalar>
Scalar equilibria_dim_bound(Scalar lambda, Scalar c, Scalar alpha) {
  return entropy_rate_factor(alpha) * std::pow(Scalar(32) * lambda / c, Scalar(1) / alpha);
}

/// ||u - v||_V <= sqrt(lambda) |u - v|_H on the equilibria set.
template <typename Scalar>
Scalar equilibrium_lipschitz_constant(Scalar lambda) {
  if (!(lambda > Scalar(0))) throw ConfigError("equilibrium_lipschitz_constant: lambda must be positive");
  return std::sqrt(lambda);
}

/// alpha = 2 / N and c = (4 pi N / (N + 2)) Gamma(1 + N/2)^{2/N} |Omega|^{-2/N}.
inline LiYauConstants li_yau_constants(const DomainParams& domain) {
  domain.validate();
  const double n = domain.dimension;
  const double gamma = lanczos_gamma(1.0 + n / 2.0);
  return LiYauConstants{2.0 / n, (4.0 * std::numbers::pi * n / (n + 2.0)) * std::pow(gamma, 2.0 / n) *
                                     std::pow(domain.volume, -2.0 / n)};
}

/// 32^{N/2} ((ln 3 + 2/N) / ln 2) ((N + 2) / (4 pi N))^{N/2} |Omega| lambda^{N/2} / Gamma(1 + N/2).
inline double elliptic_corollary_bound(const DomainParams& domain, double lambda) {
  domain.validate();
  if (!(lambda > 0.0)) throw ConfigError("elliptic_corollary_bound: lambda must be positive");
  const double n = domain.dimension;
  const double half = n / 2.0;
  return std::pow(32.0, half) * entropy_rate_factor(2.0 / n) *
         std::pow((n + 2.0) / (4.0 * std::numbers::pi * n), half) / lanczos_gamma(1.0 + half) *
         domain.volume * std::pow(lambda, half);
}

inline SmoothingConstant smoothing_constant_parabolic(const ReactionParams& params) {
  params.validate();
  const double ratio = params.gamma_over_beta();
  const double cgb = 1.0 / (2.0 + ratio);
  SmoothingConstant s;
  s.C = std::sqrt(2.0 * params.lambda * (1.0 + ratio));
  s.c_gamma_beta = cgb;
  s.time_star = cgb / params.lambda;
  s.c_tilde = std::exp(2.0 * cgb) / (2.0 * cgb) + 0.5 * cgb * (1.0 + ratio) * (1.0 + ratio);
  // The cap uses Cgb >= (2/3)/(1 + gamma/beta), true only for gamma/beta >= 1;
  // below about 0.727 the cap is false outright.
  if (ratio >= 1.0) s.c_tilde_cap = (0.75 * std::exp(2.0 / 3.0) + 0.5) * (1.0 + ratio);
  return s;
}

/// 8^N ((ln 3 + 2/N) / ln 2) ((N + 2) / (4 pi N))^{N/2} |Omega| (1 + gamma/beta)^{N/2} lambda^{N/2} / Gamma(1 + N/2).
inline double parabolic_bound(const DomainParams& domain, const ReactionParams& params) {
  domain.validate();
  params.validate();
  const double n = domain.dimension;
  const double half = n / 2.0;
  return std::pow(8.0, n) * entropy_rate_factor(2.0 / n) *
         std::pow((n + 2.0) / (4.0 * std::numbers::pi * n), half) / lanczos_gamma(1.0 + half) *
         domain.volume * std::pow(1.0 + params.gamma_over_beta(), half) * std::pow(params.lambda, half);
}

/// Absorbing L^2 radius squared: (2 (p - 2) / p^2) (1 / (beta lambda_1)) |Omega| lambda^{p/(p-2)}.
inline double attractor_l2_radius_sq(const ReactionParams& params, double volume, double lambda1) {
  params.validate();
  if (!(volume > 0.0) || !(lambda1 > 0.0)) throw ConfigError("attractor radius: volume and lambda_1 must be positive");
  const double p = params.p;
  return (2.0 * (p - 2.0) / (p * p)) / (params.beta * lambda1) * volume *
         std::pow(params.lambda, p / (p - 2.0));
}

/// Uniform bound M = (lambda / beta)^{1/(p-2)}.
inline double attractor_linf_bound(const ReactionParams& params) {
  params.validate();
  return std::pow(params.lambda / params.beta, 1.0 / (params.p - 2.0));
}

struct OptimalityLower {
  double formula = 0.0;      // (lambda / upper_C)^{1/alpha} - 1
  std::size_t counted = 0;   // N(lambda)
};

/// Dimension of the equilibria subspace span{w_j : lambda_j < lambda}
/// attained by g(u) = sum_{j <= n} (lambda - lambda_j) P_j u, against the
/// counting estimate available under lambda_j <= C j^alpha.
inline OptimalityLower optimality_lower(double lambda, double upper_C, double alpha, const EigenSequence& seq) {
  if (!(lambda > 0.0) || !(upper_C > 0.0) || !(alpha > 0.0)) {
    throw ConfigError("optimality_lower: lambda, C and alpha must be positive");
  }
  return OptimalityLower{std::pow(lambda / upper_C, 1.0 / alpha) - 1.0, counting_function(seq, lambda)};
}

}  // namespace kedim
