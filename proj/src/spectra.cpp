#include "kedim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "kedim/errors.hpp"
#include "kedim/special.hpp"

namespace kedim {

namespace {

constexpr double kPi = std::numbers::pi;
// Hard cap on lattice points visited while enumerating a box spectrum.
constexpr std::size_t kMaxLatticePoints = 60'000'000;

}  // namespace

DomainParams DomainParams::box(std::vector<double> sides) {
  DomainParams d;
  d.dimension = static_cast<int>(sides.size());
  d.volume = std::accumulate(sides.begin(), sides.end(), 1.0, std::multiplies<>());
  d.side_lengths = std::move(sides);
  d.validate();
  return d;
}

DomainParams DomainParams::general(int dimension, double volume) {
  DomainParams d;
  d.dimension = dimension;
  d.volume = volume;
  d.validate();
  return d;
}

void DomainParams::validate() const {
  if (dimension < 1) throw ConfigError("domain: dimension N must be >= 1");
  if (!(volume > 0.0) || !std::isfinite(volume)) throw ConfigError("domain: volume must be positive");
  if (side_lengths) {
    if (static_cast<int>(side_lengths->size()) != dimension) {
      throw ConfigError("domain: number of side lengths must equal N");
    }
    double product = 1.0;
    for (double l : *side_lengths) {
      if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("domain: side lengths must be positive");
      product *= l;
    }
    if (std::abs(product - volume) > 1e-12 * volume) {
      throw ConfigError("domain: volume must equal the product of the side lengths");
    }
  }
}

EigenSequence::EigenSequence(std::vector<double> values, SpectrumSource source)
    : values_(std::move(values)), source_(std::move(source)) {
  if (values_.empty()) throw ConfigError("eigen sequence: at least one eigenvalue required");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw ConfigError("eigen sequence: eigenvalues must be positive and finite");
    }
    if (i > 0 && values_[i] < values_[i - 1]) {
      throw ConfigError("eigen sequence: eigenvalues must be nondecreasing");
    }
  }
}

EigenSequence EigenSequence::from_values(std::vector<double> values) {
  return EigenSequence(std::move(values), spectrum_source::Explicit{});
}

EigenSequence EigenSequence::power_law(double c, double alpha, std::size_t count) {
  if (!(c > 0.0) || !(alpha > 0.0)) throw ConfigError("power-law spectrum: c and alpha must be positive");
  if (count == 0) throw ConfigError("power-law spectrum: count must be >= 1");
  std::vector<double> v(count);
  for (std::size_t j = 1; j <= count; ++j) v[j - 1] = c * std::pow(static_cast<double>(j), alpha);
  return EigenSequence(std::move(v), spectrum_source::PowerLaw{c, alpha});
}

EigenSequence EigenSequence::box(const DomainParams& domain, std::vector<double> sorted_values) {
  return EigenSequence(std::move(sorted_values),
                       spectrum_source::BoxDomain{domain.dimension, *domain.side_lengths});
}

double EigenSequence::operator()(std::size_t j) const {
  if (j < 1 || j > values_.size()) {
    throw BoundsError(fmt::format("eigenvalue index {} outside 1..{}", j, values_.size()));
  }
  return values_[j - 1];
}

EigenSequence EigenSequence::scaled(double s) const {
  if (!(s > 0.0)) throw ConfigError("scale factor must be positive");
  std::vector<double> v(values_);
  for (double& x : v) x *= s;
  return EigenSequence(std::move(v), spectrum_source::Explicit{});
}

EigenSequence box_eigenvalues(const DomainParams& domain, std::size_t count) {
  domain.validate();
  if (!domain.side_lengths) {
    throw ConfigError("box_eigenvalues: side lengths are required for an exact box spectrum");
  }
  if (count == 0) throw ConfigError("box_eigenvalues: count must be >= 1");
  const auto& sides = *domain.side_lengths;
  const int n = domain.dimension;

  // Eigenvalue of multi-index k is sum_i k_i^2 * w_i with w_i = (pi / L_i)^2.
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = (kPi / sides[i]) * (kPi / sides[i]);
  // floor[i] = sum_{r >= i} w_r, the smallest contribution of axes i..n-1.
  std::vector<double> floor(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) floor[i] = floor[i + 1] + w[i];

  // Weyl estimate of the threshold holding `count` eigenvalues, then grow it
  // until the enumeration below the threshold yields enough values.
  const double weyl = 4.0 * kPi * kPi *
                      std::pow(static_cast<double>(count) /
                                   (unit_ball_volume<double>(n) * domain.volume),
                               2.0 / n);
  double threshold = std::max(1.5 * weyl, floor[0]) + floor[0];

  std::vector<double> found;
  for (int attempt = 0; attempt < 64; ++attempt) {
    found.clear();
    std::size_t visited = 0;
    std::function<void(int, double)> enumerate = [&](int axis, double partial) {
      if (axis == n) {
        found.push_back(partial);
        return;
      }
      for (long k = 1;; ++k) {
        const double value = partial + static_cast<double>(k) * static_cast<double>(k) * w[axis];
        if (value + floor[axis + 1] > threshold) break;
        if (++visited > kMaxLatticePoints) {
          throw InternalError(fmt::format(
              "box_eigenvalues: lattice search exceeded {} points (N={}, count={}, threshold={:.6g})",
              kMaxLatticePoints, n, count, threshold));
        }
        enumerate(axis + 1, value);
      }
    };
    enumerate(0, 0.0);
    if (found.size() >= count) break;
    threshold *= 1.5;
  }
  if (found.size() < count) {
    throw InternalError("box_eigenvalues: threshold search did not reach the requested count");
  }
  std::sort(found.begin(), found.end());
  found.resize(count);
  return EigenSequence::box(domain, std::move(found));
}

double li_yau_bound(const DomainParams& domain, std::size_t j) {
  domain.validate();
  if (j < 1) throw ConfigError("li_yau_bound: j must be >= 1");
  const double n = domain.dimension;
  const double ball = unit_ball_volume<double>(domain.dimension);
  const double c_n = (2.0 * kPi) * (2.0 * kPi) * std::pow(ball, -2.0 / n);
  return (n * c_n / (n + 2.0)) * std::pow(static_cast<double>(j), 2.0 / n) *
         std::pow(domain.volume, -2.0 / n);
}

GrowthCertificate growth_certificate(const EigenSequence& seq, double alpha, std::size_t range) {
  if (!(alpha > 0.0)) throw ConfigError("growth_certificate: alpha must be positive");
  if (range == 0) throw ConfigError("growth_certificate: range must be >= 1");
  if (range > seq.count_available()) {
    throw BoundsError(fmt::format("growth_certificate: range {} exceeds the {} available eigenvalues",
                                  range, seq.count_available()));
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t j = 1; j <= range; ++j) {
    const double ratio = seq(j) / std::pow(static_cast<double>(j), alpha);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return GrowthCertificate{lo, alpha, range, hi};
}

std::size_t counting_function(const EigenSequence& seq, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("counting_function: lambda must be positive");
  const auto& v = seq.values();
  if (lambda > v.back()) {
    throw BoundsError(fmt::format(
        "counting_function: lambda = {} exceeds the largest available eigenvalue {}; request a larger count",
        lambda, v.back()));
  }
  return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), lambda) - v.begin());
}

}  // namespace kedim
