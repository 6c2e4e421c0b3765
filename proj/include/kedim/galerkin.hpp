#pragma once

// Spectral Galerkin semigroup for u_t - u_xx + g(u) = lambda u on (0, L) with
// zero Dirichlet data, in the orthonormal sine basis
// w_j(x) = sqrt(2/L) sin(j pi x / L), lambda_j = (j pi / L)^2.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kedim/dimension_bounds.hpp"

namespace kedim {

struct Nonlinearity {
  enum class Kind { PowerLaw, SpectralProjection };

  Kind kind = Kind::PowerLaw;
  double beta = 1.0;
  double p = 4.0;
  // SpectralProjection: g(u) = sum_{j <= n} (lambda - lambda_j) P_j u.
  double lambda = 0.0;
  std::size_t n = 0;

  static Nonlinearity power_law(double beta, double p);
  static Nonlinearity spectral_projection(double lambda, std::size_t n);

  void validate() const;

  /// beta sign(s) |s|^{p-1}
  double value(double s) const;
  /// beta (p - 1) |s|^{p-2}
  double derivative(double s) const;
};

struct SolverConfig {
  enum class Integrator { ImexEuler, Etdrk2 };

  std::size_t modes = 64;
  double dt = 1e-3;
  std::size_t quadrature_nodes = 0;  // 0 selects 2 * modes
  Integrator integrator = Integrator::ImexEuler;
  double newton_tol = 1e-10;
  std::size_t newton_max_iter = 60;
  double length = std::numbers::pi;

  std::size_t nodes() const noexcept { return quadrature_nodes == 0 ? 2 * modes : quadrature_nodes; }
  void validate() const;
};

const char* to_string(SolverConfig::Integrator i);

struct GalerkinState {
  Eigen::VectorXd coeffs;
  double time = 0.0;
};

/// W and V of a difference w = u - v along a time grid.
struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> W;     // |w|^2 in L^2
  std::vector<double> V;     // |grad w|^2 in L^2
  std::vector<double> Linf;  // max |w| on the quadrature grid

  /// Cumulative trapezoid integral of V, same length as times.
  std::vector<double> integral_V() const;
  /// max_t (W(t) + 2 int_0^t V) / (e^{2 lambda t} W(0)); 0 when W(0) = 0.
  double worst_energy_ratio(double lambda) const;
};

struct EquilibriumLipschitzReport {
  bool passed = true;
  std::size_t pairs_checked = 0;
  double worst_ratio = 0.0;
  double bound = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  std::optional<std::pair<std::size_t, std::size_t>> violation;
};

struct EquilibriaSearch {
  std::vector<GalerkinState> equilibria;
  std::vector<double> residuals;         // at M modes
  std::vector<double> residuals_double;  // re-evaluated with 2M modes
  std::size_t seeds_tried = 0;
  std::size_t seeds_failed = 0;
};

class GalerkinSolver {
 public:
  explicit GalerkinSolver(SolverConfig cfg);

  const SolverConfig& config() const noexcept { return cfg_; }
  std::size_t modes() const noexcept { return cfg_.modes; }
  const Eigen::VectorXd& eigenvalues() const noexcept { return lambda_; }
  const Eigen::VectorXd& nodes() const noexcept { return x_; }

  GalerkinState zero() const;
  /// a * w_j
  GalerkinState mode(std::size_t j, double a) const;

  /// Values at the quadrature nodes.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const;
  /// Quadrature projection onto w_1..w_M.
  Eigen::VectorXd analyze(const Eigen::VectorXd& values) const;

  double l2(const Eigen::VectorXd& coeffs) const { return coeffs.norm(); }
  double h1(const Eigen::VectorXd& coeffs) const;
  double linf(const Eigen::VectorXd& coeffs) const;

  /// Galerkin projection of g(u).
  Eigen::VectorXd nonlinear_term(const Eigen::VectorXd& coeffs, const Nonlinearity& nl) const;
  /// lambda u - A u - g(u) in coefficient space.
  Eigen::VectorXd residual(const Eigen::VectorXd& coeffs, const Nonlinearity& nl, double lambda) const;

  /// Approximates S(T) u0. Throws DivergenceError / NumericError.
  GalerkinState evolve(const GalerkinState& u0, const Nonlinearity& nl, double lambda, double T) const;

  /// Evolves both initial data in lockstep, recording the difference energy
  /// every `record_every` steps (and at T).
  EnergyTrace difference_energy_trace(const GalerkinState& u0, const GalerkinState& v0, const Nonlinearity& nl,
                                      double lambda, double T, std::size_t record_every = 1) const;

  /// ||S(t*)u0 - S(t*)v0||_{H^1_0} / |u0 - v0|_{L^2} with t* = C_{gamma,beta} / lambda.
  double smoothing_ratio(const GalerkinState& u0, const GalerkinState& v0, const Nonlinearity& nl,
                         const ReactionParams& params) const;

  /// Damped Newton on lambda u - A u - g(u) = 0. Throws ConvergenceError.
  GalerkinState solve_equilibrium(const GalerkinState& guess, const Nonlinearity& nl, double lambda) const;

  /// Residual of an M-mode state re-evaluated with 2M modes.
  double residual_double_resolution(const GalerkinState& u, const Nonlinearity& nl, double lambda) const;

  /// Multi-start Newton from {0} and {+-a w_j : j <= count + 1, a in amplitudes};
  /// keeps states whose pairwise L^2 distance exceeds 10 newton_tol.
  EquilibriaSearch find_equilibria(const Nonlinearity& nl, double lambda, std::size_t count,
                                   const std::vector<double>& amplitudes, unsigned jobs = 1) const;

 private:
  double blowup_radius(const GalerkinState& u0, const Nonlinearity& nl, double lambda) const;
  void step(Eigen::VectorXd& u, const Nonlinearity& nl, double lambda, double h) const;
  void check_state(const Eigen::VectorXd& u, double t, double limit) const;

  SolverConfig cfg_;
  Eigen::VectorXd lambda_;  // lambda_j
  Eigen::VectorXd x_;       // quadrature nodes
  Eigen::MatrixXd synth_;   // Q x M, w_j(x_i)
  Eigen::MatrixXd anal_;    // M x Q, (L / (Q + 1)) w_j(x_i)
};

/// ||u - v||_{H^1_0} <= sqrt(lambda) |u - v|_{L^2} (1 + tol) over all pairs.
EquilibriumLipschitzReport verify_equilibrium_lipschitz(const GalerkinSolver& solver,
                                                        const std::vector<GalerkinState>& states, double lambda,
                                                        double tol = 0.02);

}  // namespace kedim
