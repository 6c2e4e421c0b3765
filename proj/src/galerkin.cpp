#include "kedim/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "kedim/errors.hpp"
#include "kedim/parallel.hpp"

namespace kedim {

namespace {

// phi_1(z) = (e^z - 1) / z and phi_2(z) = (e^z - 1 - z) / z^2, with series near 0.
double phi1(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0;
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-3) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
  return (std::expm1(z) - z) / (z * z);
}

}  // namespace

Nonlinearity Nonlinearity::power_law(double beta, double p) {
  Nonlinearity nl;
  nl.kind = Kind::PowerLaw;
  nl.beta = beta;
  nl.p = p;
  nl.validate();
  return nl;
}

Nonlinearity Nonlinearity::spectral_projection(double lambda, std::size_t n) {
  Nonlinearity nl;
  nl.kind = Kind::SpectralProjection;
  nl.lambda = lambda;
  nl.n = n;
  nl.validate();
  return nl;
}

void Nonlinearity::validate() const {
  if (kind == Kind::PowerLaw) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("nonlinearity: beta must be positive");
    if (!(p > 2.0) || !std::isfinite(p)) throw ConfigError("nonlinearity: p must be > 2");
  } else {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("nonlinearity: lambda must be positive");
    if (n == 0) throw ConfigError("nonlinearity: projection rank n must be >= 1");
  }
}

double Nonlinearity::value(double s) const {
  if (p == 4.0) return beta * s * s * s;
  return beta * std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

double Nonlinearity::derivative(double s) const {
  if (p == 4.0) return 3.0 * beta * s * s;
  return beta * (p - 1.0) * std::pow(std::abs(s), p - 2.0);
}

void SolverConfig::validate() const {
  if (modes == 0) throw ConfigError("solver: modes must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver: dt must be positive");
  if (2 * nodes() < 3 * modes) throw ConfigError("solver: quadrature_nodes must be >= 3 modes / 2");
  if (!(newton_tol > 0.0)) throw ConfigError("solver: newton_tol must be positive");
  if (newton_max_iter == 0) throw ConfigError("solver: newton_max_iter must be >= 1");
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("solver: length must be positive");
}

const char* to_string(SolverConfig::Integrator i) {
  return i == SolverConfig::Integrator::ImexEuler ? "imex_euler" : "etdrk2";
}

std::vector<double> EnergyTrace::integral_V() const {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (V[k] + V[k - 1]);
  }
  return out;
}

double EnergyTrace::worst_energy_ratio(double lambda) const {
  if (times.empty() || W.front() == 0.0) return 0.0;
  const auto iv = integral_V();
  double worst = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double rhs = std::exp(2.0 * lambda * (times[k] - times.front())) * W.front();
    worst = std::max(worst, (W[k] + 2.0 * iv[k]) / rhs);
  }
  return worst;
}

GalerkinSolver::GalerkinSolver(SolverConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  const auto m = static_cast<Eigen::Index>(cfg_.modes);
  const auto q = static_cast<Eigen::Index>(cfg_.nodes());
  const double L = cfg_.length;
  lambda_.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double k = static_cast<double>(j + 1) * std::numbers::pi / L;
    lambda_[j] = k * k;
  }
  x_.resize(q);
  synth_.resize(q, m);
  const double norm = std::sqrt(2.0 / L);
  for (Eigen::Index i = 0; i < q; ++i) {
    x_[i] = static_cast<double>(i + 1) * L / static_cast<double>(q + 1);
    for (Eigen::Index j = 0; j < m; ++j) {
      // Integer argument reduction keeps the table exactly odd/even symmetric.
      const auto num = static_cast<double>(((i + 1) * (j + 1)) % (2 * (q + 1)));
      synth_(i, j) = norm * std::sin(std::numbers::pi * num / static_cast<double>(q + 1));
    }
  }
  anal_ = (L / static_cast<double>(q + 1)) * synth_.transpose();
}

GalerkinState GalerkinSolver::zero() const {
  return GalerkinState{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cfg_.modes)), 0.0};
}

GalerkinState GalerkinSolver::mode(std::size_t j, double a) const {
  if (j == 0 || j > cfg_.modes) throw BoundsError(fmt::format("mode index {} outside 1..{}", j, cfg_.modes));
  GalerkinState s = zero();
  s.coeffs[static_cast<Eigen::Index>(j - 1)] = a;
  return s;
}

Eigen::VectorXd GalerkinSolver::synthesize(const Eigen::VectorXd& coeffs) const { return synth_ * coeffs; }

Eigen::VectorXd GalerkinSolver::analyze(const Eigen::VectorXd& values) const { return anal_ * values; }

double GalerkinSolver::h1(const Eigen::VectorXd& coeffs) const {
  return std::sqrt((lambda_.array() * coeffs.array().square()).sum());
}

double GalerkinSolver::linf(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() == 0) return 0.0;
  return synthesize(coeffs).cwiseAbs().maxCoeff();
}

Eigen::VectorXd GalerkinSolver::nonlinear_term(const Eigen::VectorXd& coeffs, const Nonlinearity& nl) const {
  if (nl.kind == Nonlinearity::Kind::SpectralProjection) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(coeffs.size());
    const auto n = std::min<Eigen::Index>(static_cast<Eigen::Index>(nl.n), coeffs.size());
    for (Eigen::Index j = 0; j < n; ++j) g[j] = (nl.lambda - lambda_[j]) * coeffs[j];
    return g;
  }
  Eigen::VectorXd values = synthesize(coeffs);
  for (Eigen::Index i = 0; i < values.size(); ++i) values[i] = nl.value(values[i]);
  return analyze(values);
}

Eigen::VectorXd GalerkinSolver::residual(const Eigen::VectorXd& coeffs, const Nonlinearity& nl, double lambda) const {
  return ((lambda - lambda_.array()) * coeffs.array()).matrix() - nonlinear_term(coeffs, nl);
}

double GalerkinSolver::blowup_radius(const GalerkinState& u0, const Nonlinearity& nl, double lambda) const {
  double r = std::max(1.0, u0.coeffs.norm());
  if (nl.kind == Nonlinearity::Kind::PowerLaw) {
    const ReactionParams params{lambda, nl.beta, nl.beta * (nl.p - 1.0), nl.p};
    r = std::max(r, std::sqrt(attractor_l2_radius_sq(params, cfg_.length, lambda_[0])));
  }
  return 1e3 * r;
}

void GalerkinSolver::check_state(const Eigen::VectorXd& u, double t, double limit) const {
  const double n = u.norm();
  if (!std::isfinite(n)) {
    throw NumericError(fmt::format("non-finite state at t = {:.6g} (dt = {:.3g}, M = {})", t, cfg_.dt, cfg_.modes));
  }
  if (n > limit) {
    throw DivergenceError(fmt::format(
        "blow-up at t = {:.6g}: |u|_L2 = {:.6g} exceeds {:.6g}; reduce dt = {:.3g} or change M = {}", t, n, limit,
        cfg_.dt, cfg_.modes));
  }
}

void GalerkinSolver::step(Eigen::VectorXd& u, const Nonlinearity& nl, double lambda, double h) const {
  if (cfg_.integrator == SolverConfig::Integrator::ImexEuler) {
    const Eigen::VectorXd g = nonlinear_term(u, nl);
    u = ((u.array() + h * (lambda * u.array() - g.array())) / (1.0 + h * lambda_.array())).matrix();
    return;
  }
  // ETDRK2 with linear part -lambda_j and N(u) = lambda u - g(u).
  const Eigen::Index m = u.size();
  const Eigen::VectorXd n0 = lambda * u - nonlinear_term(u, nl);
  Eigen::VectorXd a(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double z = -h * lambda_[j];
    a[j] = std::exp(z) * u[j] + h * phi1(z) * n0[j];
  }
  const Eigen::VectorXd n1 = lambda * a - nonlinear_term(a, nl);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double z = -h * lambda_[j];
    u[j] = a[j] + h * phi2(z) * (n1[j] - n0[j]);
  }
}

GalerkinState GalerkinSolver::evolve(const GalerkinState& u0, const Nonlinearity& nl, double lambda,
                                     double T) const {
  nl.validate();
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("evolve: T must be nonnegative");
  if (u0.coeffs.size() != static_cast<Eigen::Index>(cfg_.modes)) throw ConfigError("evolve: state has wrong mode count");
  GalerkinState u = u0;
  if (T == 0.0) return u;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(T / cfg_.dt - 1e-9)));
  const double h = T / static_cast<double>(steps);
  const double limit = blowup_radius(u0, nl, lambda);
  for (std::size_t k = 1; k <= steps; ++k) {
    step(u.coeffs, nl, lambda, h);
    check_state(u.coeffs, u0.time + h * static_cast<double>(k), limit);
  }
  u.time = u0.time + T;
  return u;
}

EnergyTrace GalerkinSolver::difference_energy_trace(const GalerkinState& u0, const GalerkinState& v0,
                                                    const Nonlinearity& nl, double lambda, double T,
                                                    std::size_t record_every) const {
  nl.validate();
  if (!(T > 0.0)) throw ConfigError("difference_energy_trace: T must be positive");
  record_every = std::max<std::size_t>(1, record_every);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(T / cfg_.dt - 1e-9)));
  const double h = T / static_cast<double>(steps);
  const double limit = std::max(blowup_radius(u0, nl, lambda), blowup_radius(v0, nl, lambda));
  Eigen::VectorXd u = u0.coeffs;
  Eigen::VectorXd v = v0.coeffs;
  EnergyTrace trace;
  auto record = [&](double t) {
    const Eigen::VectorXd w = u - v;
    trace.times.push_back(t);
    trace.W.push_back(w.squaredNorm());
    trace.V.push_back((lambda_.array() * w.array().square()).sum());
    trace.Linf.push_back(linf(w));
  };
  record(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    step(u, nl, lambda, h);
    step(v, nl, lambda, h);
    const double t = h * static_cast<double>(k);
    check_state(u, t, limit);
    check_state(v, t, limit);
    if (k % record_every == 0 || k == steps) record(t);
  }
  return trace;
}

double GalerkinSolver::smoothing_ratio(const GalerkinState& u0, const GalerkinState& v0, const Nonlinearity& nl,
                                       const ReactionParams& params) const {
  const double denom = (u0.coeffs - v0.coeffs).norm();
  if (denom == 0.0) throw ComputationError("smoothing_ratio: degenerate pair (u0 == v0)");
  const double t_star = *smoothing_constant_parabolic(params).time_star;
  const GalerkinState u = evolve(u0, nl, params.lambda, t_star);
  const GalerkinState v = evolve(v0, nl, params.lambda, t_star);
  return h1(u.coeffs - v.coeffs) / denom;
}

GalerkinState GalerkinSolver::solve_equilibrium(const GalerkinState& guess, const Nonlinearity& nl,
                                                double lambda) const {
  nl.validate();
  const auto m = static_cast<Eigen::Index>(cfg_.modes);
  if (guess.coeffs.size() != m) throw ConfigError("solve_equilibrium: guess has wrong mode count");
  Eigen::VectorXd u = guess.coeffs;
  Eigen::VectorXd F = residual(u, nl, lambda);
  double r = F.norm();
  for (std::size_t it = 0; it < cfg_.newton_max_iter; ++it) {
    if (!std::isfinite(r)) throw ConvergenceError("solve_equilibrium: residual became non-finite", r);
    if (r <= cfg_.newton_tol) return GalerkinState{u, 0.0};

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    J.diagonal() = (lambda - lambda_.array()).matrix();
    if (nl.kind == Nonlinearity::Kind::PowerLaw) {
      const Eigen::VectorXd values = synthesize(u);
      Eigen::VectorXd dg(values.size());
      for (Eigen::Index i = 0; i < values.size(); ++i) dg[i] = nl.derivative(values[i]);
      J.noalias() -= anal_ * dg.asDiagonal() * synth_;
    } else {
      const auto n = std::min<Eigen::Index>(static_cast<Eigen::Index>(nl.n), m);
      for (Eigen::Index j = 0; j < n; ++j) J(j, j) -= nl.lambda - lambda_[j];
    }
    const Eigen::VectorXd delta = J.partialPivLu().solve(-F);
    if (!delta.allFinite()) throw ConvergenceError("solve_equilibrium: singular Jacobian", r);

    // Backtracking on the residual norm.
    double t = 1.0;
    Eigen::VectorXd trial = u + delta;
    Eigen::VectorXd Ft = residual(trial, nl, lambda);
    while (!(Ft.norm() <= (1.0 - 1e-4 * t) * r) && t > 1.0 / 1024.0) {
      t *= 0.5;
      trial = u + t * delta;
      Ft = residual(trial, nl, lambda);
    }
    u = std::move(trial);
    F = std::move(Ft);
    r = F.norm();
  }
  if (r <= cfg_.newton_tol) return GalerkinState{u, 0.0};
  throw ConvergenceError(fmt::format("solve_equilibrium: no convergence in {} iterations (residual {:.3e})",
                                     cfg_.newton_max_iter, r),
                         r);
}

double GalerkinSolver::residual_double_resolution(const GalerkinState& u, const Nonlinearity& nl,
                                                  double lambda) const {
  SolverConfig fine = cfg_;
  fine.modes = 2 * cfg_.modes;
  fine.quadrature_nodes = 2 * cfg_.nodes();
  const GalerkinSolver solver(fine);
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fine.modes));
  padded.head(u.coeffs.size()) = u.coeffs;
  return solver.residual(padded, nl, lambda).norm();
}

EquilibriaSearch GalerkinSolver::find_equilibria(const Nonlinearity& nl, double lambda, std::size_t count,
                                                 const std::vector<double>& amplitudes, unsigned jobs) const {
  std::vector<GalerkinState> seeds{zero()};
  const std::size_t top = std::min(count + 1, cfg_.modes);
  for (std::size_t j = 1; j <= top; ++j) {
    for (double a : amplitudes) {
      seeds.push_back(mode(j, a));
      seeds.push_back(mode(j, -a));
    }
  }
  std::vector<std::optional<GalerkinState>> solved(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    try {
      solved[i] = solve_equilibrium(seeds[i], nl, lambda);
    } catch (const ConvergenceError&) {
      solved[i].reset();
    }
  });

  EquilibriaSearch out;
  out.seeds_tried = seeds.size();
  const double threshold = 10.0 * cfg_.newton_tol;
  for (auto& s : solved) {
    if (!s) {
      ++out.seeds_failed;
      continue;
    }
    const bool fresh = std::all_of(out.equilibria.begin(), out.equilibria.end(), [&](const GalerkinState& e) {
      return (e.coeffs - s->coeffs).norm() > threshold;
    });
    if (!fresh) continue;
    out.residuals.push_back(residual(s->coeffs, nl, lambda).norm());
    out.residuals_double.push_back(residual_double_resolution(*s, nl, lambda));
    out.equilibria.push_back(std::move(*s));
  }
  return out;
}

EquilibriumLipschitzReport verify_equilibrium_lipschitz(const GalerkinSolver& solver,
                                                        const std::vector<GalerkinState>& states, double lambda,
                                                        double tol) {
  EquilibriumLipschitzReport rep;
  rep.bound = equilibrium_lipschitz_constant(lambda);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const Eigen::VectorXd w = states[i].coeffs - states[j].coeffs;
      const double l2 = w.norm();
      if (l2 == 0.0) continue;
      const double ratio = solver.h1(w) / l2;
      ++rep.pairs_checked;
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_pair = std::make_pair(i, j);
      }
      if (ratio > rep.bound * (1.0 + tol) && !rep.violation) {
        rep.passed = false;
        rep.violation = std::make_pair(i, j);
      }
    }
  }
  return rep;
}

}  // namespace kedim
