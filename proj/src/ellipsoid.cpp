#include "kedim/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "kedim/errors.hpp"

namespace kedim {

Ellipsoid Ellipsoid::power_law(double c, double alpha) {
  if (!(c > 0.0) || !(alpha > 0.0) || !std::isfinite(c) || !std::isfinite(alpha)) {
    throw ConfigError("power-law ellipsoid: c and alpha must be positive");
  }
  Ellipsoid e;
  e.kind_ = Kind::PowerLaw;
  e.c_ = c;
  e.alpha_ = alpha;
  return e;
}

Ellipsoid Ellipsoid::from_spectrum(const EigenSequence& seq) {
  std::vector<double> mu(seq.count_available());
  for (std::size_t j = 1; j <= mu.size(); ++j) mu[j - 1] = 1.0 / seq(j);
  Ellipsoid e = from_axes(std::move(mu));
  e.kind_ = Kind::FromSpectrum;
  return e;
}

Ellipsoid Ellipsoid::from_axes(std::vector<double> mu) {
  if (mu.empty()) throw ConfigError("ellipsoid: at least one semi-axis required");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i])) throw ConfigError("ellipsoid: mu_j must be positive");
    if (i > 0 && mu[i] > mu[i - 1]) throw ConfigError("ellipsoid: mu_j must be nonincreasing");
  }
  Ellipsoid e;
  e.kind_ = Kind::Explicit;
  e.mu_ = std::move(mu);
  return e;
}

std::optional<double> Ellipsoid::mu(std::size_t j) const {
  if (j < 1) return std::nullopt;
  if (kind_ == Kind::PowerLaw) return 1.0 / (*c_ * std::pow(static_cast<double>(j), *alpha_));
  if (j > mu_.size()) return std::nullopt;
  return mu_[j - 1];
}

double Ellipsoid::mu_at(std::size_t j) const {
  auto m = mu(j);
  if (!m) throw BoundsError(fmt::format("ellipsoid: semi-axis {} is not known ({} available)", j, mu_.size()));
  return *m;
}

std::size_t Ellipsoid::known_axes() const noexcept {
  return kind_ == Kind::PowerLaw ? std::numeric_limits<std::size_t>::max() : mu_.size();
}

Eigen::VectorXd Ellipsoid::head(std::size_t d) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  for (std::size_t j = 1; j <= d; ++j) v[static_cast<Eigen::Index>(j - 1)] = mu_at(j);
  return v;
}

std::size_t truncation_dim(const Ellipsoid& e, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("truncation_dim: eps must be positive");
  const double eps2 = eps * eps;
  if (e.kind() == Ellipsoid::Kind::PowerLaw) {
    // mu_{d+1} <= eps^2  <=>  d + 1 >= (1 / (c eps^2))^{1/alpha}; start near the
    // closed form and settle the rounding by direct comparison.
    const double estimate = std::pow(1.0 / (*e.c() * eps2), 1.0 / *e.alpha());
    if (!std::isfinite(estimate) || estimate > 1e15) {
      throw BoundsError("truncation_dim: truncation dimension too large to represent");
    }
    std::size_t d = estimate > 2.0 ? static_cast<std::size_t>(estimate) - 2 : 0;
    while (d > 0 && e.mu_at(d) <= eps2) --d;
    while (e.mu_at(d + 1) > eps2) ++d;
    return d;
  }
  for (std::size_t d = 0; d < e.known_axes(); ++d) {
    if (e.mu_at(d + 1) <= eps2) return d;
  }
  throw BoundsError(fmt::format(
      "truncation_dim: tail not resolved, all {} known axes exceed eps^2 = {}", e.known_axes(), eps2));
}

VolumetricBound volumetric_count_bound(const Ellipsoid& e, double eps) {
  if (e.kind() != Ellipsoid::Kind::PowerLaw) {
    throw ConfigError("volumetric_count_bound: requires a power-law ellipsoid");
  }
  const std::size_t d = truncation_dim(e, eps);
  if (d == 0) {
    throw ConfigError(
        "volumetric_count_bound: eps^2 >= mu_1, the truncated ellipsoid is trivial; use the single "
        "origin-centred ball (d = 0)");
  }
  // eps^2 < mu_d holds by minimality of d; checked for safety.
  if (!(eps * eps < e.mu_at(d))) throw ConfigError("volumetric_count_bound: requires eps^2 < mu_d");
  double log_product = static_cast<double>(d) * std::log(3.0 / eps);
  for (std::size_t j = 1; j <= d; ++j) log_product += 0.5 * std::log(e.mu_at(j));
  VolumetricBound out;
  out.d = d;
  out.product_bound = std::exp(log_product);
  out.relaxed_bound = std::exp(static_cast<double>(d) * (std::log(3.0) + *e.alpha()));
  return out;
}

Eigen::VectorXd project_onto_ellipsoid(const Eigen::VectorXd& x, const Eigen::VectorXd& mu) {
  if (ellipsoid_gauge_sq(x, mu) <= 1.0) return x;
  // y_j = x_j mu_j / (mu_j + t) with t > 0 solving
  // f(t) = sum_j x_j^2 mu_j / (mu_j + t)^2 = 1; f is decreasing in t.
  const Eigen::ArrayXd x2mu = x.array().square() * mu.array();
  auto f = [&](double t) { return (x2mu / (mu.array() + t).square()).sum(); };
  double lo = 0.0;
  double hi = std::sqrt(x2mu.sum());
  for (int it = 0; it < 200 && hi - lo > 1e-17 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Eigen::VectorXd y = (x.array() * mu.array() / (mu.array() + hi)).matrix();
  const double g = ellipsoid_gauge_sq(y, mu);
  if (g > 1.0) y /= std::sqrt(g);
  return y;
}

bool is_two_eps_separated(const Eigen::MatrixXd& points, double eps) {
  const double min_sq = 4.0 * eps * eps;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < points.cols(); ++j) {
      if (!((points.col(i) - points.col(j)).squaredNorm() > min_sq)) return false;
    }
  }
  return true;
}

}  // namespace kedim
