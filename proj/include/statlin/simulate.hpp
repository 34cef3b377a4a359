/**
 * @file simulate.hpp
 * @brief Numerical side: mean-covariance integration, Lyapunov closed form,
 *        Monte Carlo moments, and empirical accessibility probes.
 */
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "statlin/rank.hpp"
#include "statlin/system.hpp"

namespace statlin {

/// Piecewise-constant open-loop control on a uniform grid.
struct ControlSignal {
  double horizon = 0.0;
  double dt = 0.0;
  Eigen::MatrixXd values;  // m_u x steps

  ControlSignal() = default;
  ControlSignal(double horizon_in, double dt_in, Eigen::MatrixXd values_in);

  [[nodiscard]] static ControlSignal zero(int m_u, double horizon, double dt);
  [[nodiscard]] static ControlSignal constant(const Eigen::VectorXd& u, double horizon, double dt);

  [[nodiscard]] int steps() const { return static_cast<int>(values.cols()); }
  [[nodiscard]] Eigen::VectorXd at(double t) const;
};

/// Cached double-precision evaluators for a polynomial system.
class SystemEvaluator {
 public:
  explicit SystemEvaluator(const ControlAffineSystem& sys);

  [[nodiscard]] int n() const { return sys_->n; }
  [[nodiscard]] int m_u() const { return sys_->m_u; }
  [[nodiscard]] int d() const { return sys_->d; }

  [[nodiscard]] Eigen::VectorXd drift(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
  /// State Jacobian of the drift, A(x,u) = Df0(x) + Σ u_i Dfi(x).
  [[nodiscard]] Eigen::MatrixXd drift_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
  [[nodiscard]] Eigen::MatrixXd diffusion(const Eigen::VectorXd& x) const;

 private:
  const ControlAffineSystem* sys_;
  std::vector<PolyMatrixMap> jacobians_;  // one per drift field
};

enum class SimStatus { ok, truncated_blow_up };

struct SimOptions {
  double dt = 1e-3;
  double blowup_norm = 1e8;
};

struct SimulationResult {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;
  std::vector<double> min_eig;        // smallest eigenvalue of each stored covariance
  SimStatus status = SimStatus::ok;
  int truncated_at = -1;
  std::string message;

  [[nodiscard]] bool positive_definite_throughout() const;
};

/**
 * @brief Fixed-step RK4 on the coupled mean-covariance system.
 *
 * The covariance is re-symmetrized after every step; positive definiteness is
 * monitored via the smallest eigenvalue. Trajectories whose norm exceeds the
 * blow-up bound are truncated and flagged.
 */
[[nodiscard]] SimulationResult integrate_statlin(const ControlAffineSystem& sys, const ControlSignal& u,
                                                 const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0,
                                                 const SimOptions& opts = {});

/**
 * @brief Covariance by fundamental-matrix closed form.
 *
 * Integrates the mean and the transition matrices alongside, then evaluates
 *   P(t) = Φ(t,0) [ P0 + ∫₀ᵗ Φ(0,s) G(m(s)) G(m(s))ᵀ Φ(0,s)ᵀ ds ] Φ(t,0)ᵀ
 * with trapezoidal quadrature on the integration grid.
 */
[[nodiscard]] SimulationResult lyapunov_trajectory(const ControlAffineSystem& sys, const ControlSignal& u,
                                                   const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0,
                                                   const SimOptions& opts = {});

/// Endpoint-only convenience wrapper around lyapunov_trajectory.
[[nodiscard]] Eigen::MatrixXd lyapunov_closed_form(const ControlAffineSystem& sys, const ControlSignal& u,
                                                   const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0,
                                                   double t, const SimOptions& opts = {});

struct MomentEstimates {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> mean;
  std::vector<Eigen::MatrixXd> cov;
  std::vector<Eigen::VectorXd> se_mean;
  std::vector<Eigen::MatrixXd> se_cov;
  int paths = 0;
  int excluded_paths = 0;
  std::uint64_t seed = 0;
};

/**
 * @brief Euler-Maruyama Monte Carlo with per-path deterministic RNG streams.
 *
 * Sample mean/covariance at every grid time with asymptotic standard errors.
 * Paths that blow up are excluded and counted. When an initial covariance is
 * given, initial states are drawn from N(x0, p0) through its symmetric square
 * root; otherwise every path starts exactly at x0.
 */
[[nodiscard]] MomentEstimates euler_maruyama(const ControlAffineSystem& sys, const ControlSignal& u,
                                             const Eigen::VectorXd& x0, double horizon, double dt, int paths,
                                             std::uint64_t seed, double blowup_norm = 1e8,
                                             const Eigen::MatrixXd& p0 = Eigen::MatrixXd());

struct AccessibilityProbe {
  int rank = 0;
  Eigen::VectorXd singular_values;
  bool inconclusive = false;       // an off-nominal integration failed
  Eigen::MatrixXd jacobian;        // N x n_directions finite-difference endpoint Jacobian
};

/**
 * @brief Finite-difference rank of the control-to-endpoint map on (m(T), P(T)).
 *
 * Perturbs the piecewise-constant control along random directions and
 * reports the numerical rank of the resulting endpoint Jacobian.
 */
[[nodiscard]] AccessibilityProbe empirical_accessibility(const ControlAffineSystem& sys,
                                                         const ControlSignal& u_nominal,
                                                         const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0,
                                                         int n_directions, double h, std::uint64_t seed,
                                                         double tol = 1e-8, const SimOptions& opts = {});

struct GenericityResult {
  int trials = 0;
  int passes = 0;
  double fraction = 0.0;
};

/**
 * @brief Random drift perturbations versus the full-rank condition.
 *
 * Every monomial of total degree 1..degree in every drift component receives
 * uniform rational noise in [-eps, eps]; the full-Lie rank condition is then
 * re-checked at the given points. Returns the fraction of perturbed systems
 * passing at all points. Degree-0 terms are left untouched so degree-1
 * perturbations preserve linearity of linear drifts.
 */
[[nodiscard]] GenericityResult genericity_experiment(const ControlAffineSystem& sys, const Rat& eps,
                                                     int trials, int degree, std::uint64_t seed,
                                                     std::span<const RatVec> points,
                                                     const RankCheckOptions& rank_opts = {});

}  // namespace statlin
