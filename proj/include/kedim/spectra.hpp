#pragma once

// Dirichlet Laplacian spectra, the polynomial growth hypothesis
// lambda_j >= c j^alpha, the eigenvalue counting function and the Li-Yau
// lower bound.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace kedim {

/// Space dimension N, volume |Omega| and, for boxes, the side lengths.
struct DomainParams {
  int dimension = 1;
  double volume = 0.0;
  std::optional<std::vector<double>> side_lengths;

  static DomainParams box(std::vector<double> sides);
  static DomainParams interval(double length) { return box({length}); }
  /// Domain known only through (N, |Omega|); no exact spectrum available.
  static DomainParams general(int dimension, double volume);

  /// Throws ConfigError when an invariant is broken.
  void validate() const;
};

namespace spectrum_source {
struct BoxDomain {
  int dimension;
  std::vector<double> side_lengths;
};
struct Explicit {};
struct PowerLaw {
  double c;
  double alpha;
};
}  // namespace spectrum_source

using SpectrumSource =
    std::variant<spectrum_source::BoxDomain, spectrum_source::Explicit, spectrum_source::PowerLaw>;

/// Sorted, strictly positive eigenvalues lambda_1 <= lambda_2 <= ... with
/// multiplicity. Indices in the accessors are 1-based like the math.
class EigenSequence {
 public:
  static EigenSequence from_values(std::vector<double> values);
  static EigenSequence power_law(double c, double alpha, std::size_t count);
  static EigenSequence box(const DomainParams& domain, std::vector<double> sorted_values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t count_available() const noexcept { return values_.size(); }
  double operator()(std::size_t j) const;  // lambda_j, 1-based
  double first() const { return values_.front(); }
  const SpectrumSource& source() const noexcept { return source_; }

  /// Multiplies every eigenvalue by s > 0 (source becomes Explicit).
  EigenSequence scaled(double s) const;

 private:
  EigenSequence(std::vector<double> values, SpectrumSource source);

  std::vector<double> values_;
  SpectrumSource source_;
};

/// Validated constants of lambda_j >= c j^alpha (and optionally
/// lambda_j <= upper_C j^alpha) for j <= checked_up_to.
struct GrowthCertificate {
  double c = 0.0;
  double alpha = 0.0;
  std::size_t checked_up_to = 0;
  std::optional<double> upper_C;
};

/// The `count` smallest Dirichlet eigenvalues pi^2 sum_i (k_i / L_i)^2 of a box.
EigenSequence box_eigenvalues(const DomainParams& domain, std::size_t count);

/// Li-Yau lower bound (N C_N / (N + 2)) j^{2/N} |Omega|^{-2/N} with
/// C_N = (2 pi)^2 B_N^{-2/N}.
double li_yau_bound(const DomainParams& domain, std::size_t j);

/// c = min_{j <= range} lambda_j / j^alpha, upper_C = the matching max.
GrowthCertificate growth_certificate(const EigenSequence& seq, double alpha, std::size_t range);

/// N(lambda) = min{ n : lambda_{n+1} >= lambda }, i.e. the number of
/// eigenvalues strictly below lambda. Throws BoundsError when lambda exceeds
/// the largest available eigenvalue.
std::size_t counting_function(const EigenSequence& seq, double lambda);

}  // namespace kedim
