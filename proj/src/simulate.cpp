#include "statlin/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "statlin/rng.hpp"

namespace statlin {

namespace {

int grid_steps(double horizon, double dt) {
  if (!(horizon > 0.0) || !(dt > 0.0)) throw std::invalid_argument("horizon and step must be positive");
  const double ratio = horizon / dt;
  const int steps = static_cast<int>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("horizon must be an integer multiple of the step");
  }
  return steps;
}

double min_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool exceeds(const Eigen::VectorXd& m, const Eigen::MatrixXd& p, double bound) {
  return !m.allFinite() || !p.allFinite() || m.norm() > bound || p.norm() > bound;
}

}  // namespace

ControlSignal::ControlSignal(double horizon_in, double dt_in, Eigen::MatrixXd values_in)
    : horizon(horizon_in), dt(dt_in), values(std::move(values_in)) {
  const int steps = grid_steps(horizon, dt);
  if (values.cols() != steps) throw std::invalid_argument("control grid must have horizon/dt columns");
}

ControlSignal ControlSignal::zero(int m_u, double horizon, double dt) {
  return ControlSignal(horizon, dt, Eigen::MatrixXd::Zero(m_u, grid_steps(horizon, dt)));
}

ControlSignal ControlSignal::constant(const Eigen::VectorXd& u, double horizon, double dt) {
  const int steps = grid_steps(horizon, dt);
  Eigen::MatrixXd values(u.size(), steps);
  for (int k = 0; k < steps; ++k) values.col(k) = u;
  return ControlSignal(horizon, dt, std::move(values));
}

Eigen::VectorXd ControlSignal::at(double t) const {
  if (values.rows() == 0) return Eigen::VectorXd(0);
  int idx = static_cast<int>(std::floor(t / dt + 1e-12));
  idx = std::clamp(idx, 0, steps() - 1);
  return values.col(idx);
}

SystemEvaluator::SystemEvaluator(const ControlAffineSystem& sys) : sys_(&sys) {
  jacobians_.reserve(sys.fields.size());
  for (const PolyVectorField& f : sys.fields) jacobians_.push_back(jacobian(f));
}

Eigen::VectorXd SystemEvaluator::drift(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = eval_field_d(sys_->fields[0], x);
  for (int i = 0; i < sys_->m_u; ++i) out += u[i] * eval_field_d(sys_->fields[static_cast<std::size_t>(i) + 1], x);
  return out;
}

Eigen::MatrixXd SystemEvaluator::drift_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  Eigen::MatrixXd out = jacobians_[0].eval_d(x);
  for (int i = 0; i < sys_->m_u; ++i) out += u[i] * jacobians_[static_cast<std::size_t>(i) + 1].eval_d(x);
  return out;
}

Eigen::MatrixXd SystemEvaluator::diffusion(const Eigen::VectorXd& x) const {
  return sys_->diffusion.eval_d(x);
}

bool SimulationResult::positive_definite_throughout() const {
  return std::all_of(min_eig.begin(), min_eig.end(), [](double e) { return e > 0.0; });
}

SimulationResult integrate_statlin(const ControlAffineSystem& sys, const ControlSignal& u,
                                   const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0,
                                   const SimOptions& opts) {
  if (m0.size() != sys.n || p0.rows() != sys.n || p0.cols() != sys.n) {
    throw std::invalid_argument("initial condition dimension mismatch");
  }
  if (!p0.isApprox(p0.transpose())) throw std::invalid_argument("initial covariance must be symmetric");

  const SystemEvaluator eval(sys);
  const int steps = grid_steps(u.horizon, opts.dt);
  const double dt = opts.dt;

  SimulationResult res;
  res.times.reserve(static_cast<std::size_t>(steps) + 1);
  res.mean.reserve(static_cast<std::size_t>(steps) + 1);
  res.cov.reserve(static_cast<std::size_t>(steps) + 1);

  Eigen::VectorXd m = m0;
  Eigen::MatrixXd p = p0;

  auto push = [&](double t) {
    res.times.push_back(t);
    res.mean.push_back(m);
    res.cov.push_back(p);
    res.min_eig.push_back(min_eigenvalue(p));
  };
  push(0.0);

  auto rhs = [&](double t, const Eigen::VectorXd& mm, const Eigen::MatrixXd& pp, Eigen::VectorXd& dm,
                 Eigen::MatrixXd& dp) {
    const Eigen::VectorXd uc = u.at(t);
    dm = eval.drift(mm, uc);
    const Eigen::MatrixXd a = eval.drift_jacobian(mm, uc);
    const Eigen::MatrixXd g = eval.diffusion(mm);
    dp = a * pp + pp * a.transpose() + g * g.transpose();
  };

  Eigen::VectorXd k1m, k2m, k3m, k4m;
  Eigen::MatrixXd k1p, k2p, k3p, k4p;
  for (int step = 0; step < steps; ++step) {
    const double t = step * dt;
    rhs(t, m, p, k1m, k1p);
    rhs(t + dt / 2, m + dt / 2 * k1m, p + dt / 2 * k1p, k2m, k2p);
    rhs(t + dt / 2, m + dt / 2 * k2m, p + dt / 2 * k2p, k3m, k3p);
    rhs(t + dt, m + dt * k3m, p + dt * k3p, k4m, k4p);
    m += dt / 6 * (k1m + 2 * k2m + 2 * k3m + k4m);
    p += dt / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    p = ((p + p.transpose()) / 2).eval();

    if (exceeds(m, p, opts.blowup_norm)) {
      res.status = SimStatus::truncated_blow_up;
      res.truncated_at = step + 1;
      res.message = "trajectory norm exceeded " + std::to_string(opts.blowup_norm) + " at t=" +
                    std::to_string((step + 1) * dt);
      return res;
    }
    push((step + 1) * dt);
  }
  return res;
}

SimulationResult lyapunov_trajectory(const ControlAffineSystem& sys, const ControlSignal& u,
                                     const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0,
                                     const SimOptions& opts) {
  if (m0.size() != sys.n || p0.rows() != sys.n || p0.cols() != sys.n) {
    throw std::invalid_argument("initial condition dimension mismatch");
  }
  const SystemEvaluator eval(sys);
  const int steps = grid_steps(u.horizon, opts.dt);
  const double dt = opts.dt;
  const int n = sys.n;

  // Augmented state: mean m, transition Φ(t,0), inverse transition Ψ(t) = Φ(t,0)⁻¹.
  Eigen::VectorXd m = m0;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd psi = Eigen::MatrixXd::Identity(n, n);

  auto gram_pulled_back = [&](const Eigen::VectorXd& mm, const Eigen::MatrixXd& psim) {
    const Eigen::MatrixXd g = eval.diffusion(mm);
    return (psim * g * g.transpose() * psim.transpose()).eval();
  };

  SimulationResult res;
  Eigen::MatrixXd quad = Eigen::MatrixXd::Zero(n, n);  // ∫ Φ(0,s) G Gᵀ Φ(0,s)ᵀ ds
  Eigen::MatrixXd integrand_prev = gram_pulled_back(m, psi);

  auto push = [&](double t) {
    const Eigen::MatrixXd p = phi * (p0 + quad) * phi.transpose();
    const Eigen::MatrixXd p_sym = (p + p.transpose()) / 2;
    res.times.push_back(t);
    res.mean.push_back(m);
    res.cov.push_back(p_sym);
    res.min_eig.push_back(min_eigenvalue(p_sym));
  };
  push(0.0);

  auto rhs = [&](double t, const Eigen::VectorXd& mm, const Eigen::MatrixXd& phim, const Eigen::MatrixXd& psim,
                 Eigen::VectorXd& dm, Eigen::MatrixXd& dphi, Eigen::MatrixXd& dpsi) {
    const Eigen::VectorXd uc = u.at(t);
    dm = eval.drift(mm, uc);
    const Eigen::MatrixXd a = eval.drift_jacobian(mm, uc);
    dphi = a * phim;
    dpsi = -psim * a;
  };

  Eigen::VectorXd k1m, k2m, k3m, k4m;
  Eigen::MatrixXd k1f, k2f, k3f, k4f, k1s, k2s, k3s, k4s;
  for (int step = 0; step < steps; ++step) {
    const double t = step * dt;
    rhs(t, m, phi, psi, k1m, k1f, k1s);
    rhs(t + dt / 2, m + dt / 2 * k1m, phi + dt / 2 * k1f, psi + dt / 2 * k1s, k2m, k2f, k2s);
    rhs(t + dt / 2, m + dt / 2 * k2m, phi + dt / 2 * k2f, psi + dt / 2 * k2s, k3m, k3f, k3s);
    rhs(t + dt, m + dt * k3m, phi + dt * k3f, psi + dt * k3s, k4m, k4f, k4s);
    m += dt / 6 * (k1m + 2 * k2m + 2 * k3m + k4m);
    phi += dt / 6 * (k1f + 2 * k2f + 2 * k3f + k4f);
    psi += dt / 6 * (k1s + 2 * k2s + 2 * k3s + k4s);

    const Eigen::MatrixXd integrand = gram_pulled_back(m, psi);
    quad += dt / 2 * (integrand_prev + integrand);
    integrand_prev = integrand;

    if (exceeds(m, phi, opts.blowup_norm) || !psi.allFinite()) {
      res.status = SimStatus::truncated_blow_up;
      res.truncated_at = step + 1;
      res.message = "transition matrix blow-up at t=" + std::to_string((step + 1) * dt);
      return res;
    }
    push((step + 1) * dt);
  }
  return res;
}

Eigen::MatrixXd lyapunov_closed_form(const ControlAffineSystem& sys, const ControlSignal& u,
                                     const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0, double t,
                                     const SimOptions& opts) {
  ControlSignal clipped = u;
  if (std::abs(t - u.horizon) > 1e-12) {
    const int steps = grid_steps(t, u.dt);
    clipped = ControlSignal(t, u.dt, u.values.leftCols(steps));
  }
  const SimulationResult res = lyapunov_trajectory(sys, clipped, m0, p0, opts);
  if (res.status != SimStatus::ok) throw std::runtime_error("closed-form propagation failed: " + res.message);
  return res.cov.back();
}

MomentEstimates euler_maruyama(const ControlAffineSystem& sys, const ControlSignal& u,
                               const Eigen::VectorXd& x0, double horizon, double dt, int paths,
                               std::uint64_t seed, double blowup_norm, const Eigen::MatrixXd& p0) {
  if (paths < 2) throw std::invalid_argument("need at least two paths for moment estimates");
  if (x0.size() != sys.n) throw std::invalid_argument("initial state dimension mismatch");

  const SystemEvaluator eval(sys);
  const int steps = grid_steps(horizon, dt);
  const int n = sys.n;
  const int d = sys.d;
  const double sqrt_dt = std::sqrt(dt);

  Eigen::MatrixXd init_sqrt;
  if (p0.size() > 0 && p0.norm() > 0.0) {
    if (p0.rows() != n || p0.cols() != n) throw std::invalid_argument("initial covariance dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p0);
    init_sqrt = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                es.eigenvectors().transpose();
  }

  MomentEstimates est;
  est.paths = paths;
  est.seed = seed;
  est.times.resize(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) est.times[static_cast<std::size_t>(k)] = k * dt;

  std::vector<Eigen::VectorXd> sum_x(static_cast<std::size_t>(steps) + 1, Eigen::VectorXd::Zero(n));
  std::vector<Eigen::MatrixXd> sum_xx(static_cast<std::size_t>(steps) + 1, Eigen::MatrixXd::Zero(n, n));
  int kept = 0;

  const Rng master(seed);
  std::vector<Eigen::VectorXd> path(static_cast<std::size_t>(steps) + 1);
  for (int p = 0; p < paths; ++p) {
    Rng rng = master.stream(static_cast<std::uint64_t>(p));
    Eigen::VectorXd x = x0;
    if (init_sqrt.size() > 0) {
      Eigen::VectorXd xi(n);
      for (int j = 0; j < n; ++j) xi[j] = rng.normal();
      x += init_sqrt * xi;
    }
    path[0] = x;
    bool ok = true;
    for (int k = 0; k < steps; ++k) {
      const Eigen::VectorXd uc = u.at(k * dt);
      Eigen::VectorXd noise(d);
      for (int j = 0; j < d; ++j) noise[j] = rng.normal();
      x = x + dt * eval.drift(x, uc) + sqrt_dt * (eval.diffusion(x) * noise);
      if (!x.allFinite() || x.norm() > blowup_norm) {
        ok = false;
        break;
      }
      path[static_cast<std::size_t>(k) + 1] = x;
    }
    if (!ok) {
      ++est.excluded_paths;
      continue;
    }
    ++kept;
    for (int k = 0; k <= steps; ++k) {
      sum_x[static_cast<std::size_t>(k)] += path[static_cast<std::size_t>(k)];
      sum_xx[static_cast<std::size_t>(k)] += path[static_cast<std::size_t>(k)] * path[static_cast<std::size_t>(k)].transpose();
    }
  }

  if (kept < 2) throw std::runtime_error("all Monte Carlo paths blew up");

  est.mean.resize(est.times.size());
  est.cov.resize(est.times.size());
  est.se_mean.resize(est.times.size());
  est.se_cov.resize(est.times.size());
  for (std::size_t k = 0; k < est.times.size(); ++k) {
    const Eigen::VectorXd mean = sum_x[k] / kept;
    Eigen::MatrixXd cov = (sum_xx[k] - kept * mean * mean.transpose()) / (kept - 1);
    cov = ((cov + cov.transpose()) / 2).eval();
    est.mean[k] = mean;
    est.cov[k] = cov;
    Eigen::VectorXd se_mean(n);
    for (int i = 0; i < n; ++i) se_mean[i] = std::sqrt(std::max(0.0, cov(i, i)) / kept);
    Eigen::MatrixXd se_cov(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // Asymptotic standard error of a Gaussian sample covariance entry.
        se_cov(i, j) = std::sqrt(std::max(0.0, cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / kept);
      }
    }
    est.se_mean[k] = se_mean;
    est.se_cov[k] = se_cov;
  }
  return est;
}

AccessibilityProbe empirical_accessibility(const ControlAffineSystem& sys, const ControlSignal& u_nominal,
                                           const Eigen::VectorXd& m0, const Eigen::MatrixXd& p0,
                                           int n_directions, double h, std::uint64_t seed, double tol,
                                           const SimOptions& opts) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const int big_n = sys.lifted_dim();
  if (n_directions < big_n) n_directions = big_n;

  auto endpoint = [&](const ControlSignal& u) -> std::pair<bool, Eigen::VectorXd> {
    const SimulationResult res = integrate_statlin(sys, u, m0, p0, opts);
    if (res.status != SimStatus::ok) return {false, {}};
    return {true, vectorize_d(res.mean.back(), res.cov.back())};
  };

  AccessibilityProbe probe;
  probe.jacobian = Eigen::MatrixXd::Zero(big_n, n_directions);

  Rng rng(seed);
  for (int k = 0; k < n_directions; ++k) {
    Eigen::MatrixXd direction(u_nominal.values.rows(), u_nominal.values.cols());
    for (int i = 0; i < direction.rows(); ++i)
      for (int j = 0; j < direction.cols(); ++j) direction(i, j) = rng.normal();
    const double norm = direction.norm();
    if (norm > 0.0) direction /= norm;

    ControlSignal up = u_nominal;
    ControlSignal um = u_nominal;
    up.values += h * direction;
    um.values -= h * direction;
    const auto [ok_p, ep] = endpoint(up);
    const auto [ok_m, em] = endpoint(um);
    if (!ok_p || !ok_m) {
      probe.inconclusive = true;
      return probe;
    }
    probe.jacobian.col(k) = (ep - em) / (2 * h);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(probe.jacobian);
  probe.singular_values = svd.singularValues();
  probe.rank = numerical_rank(probe.jacobian, tol);
  return probe;
}

namespace {

void monomials_up_to(int n, int degree, std::vector<std::vector<unsigned>>& out) {
  std::vector<unsigned> current(static_cast<std::size_t>(n), 0);
  // Lexicographic enumeration of all exponent vectors with 1 <= total degree <= degree.
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == n - 1) {
      current[static_cast<std::size_t>(var)] = static_cast<unsigned>(remaining);
      out.push_back(current);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      current[static_cast<std::size_t>(var)] = static_cast<unsigned>(e);
      self(self, var + 1, remaining - e);
    }
  };
  for (int total = 1; total <= degree; ++total) rec(rec, 0, total);
}

}  // namespace

GenericityResult genericity_experiment(const ControlAffineSystem& sys, const Rat& eps, int trials,
                                       int degree, std::uint64_t seed, std::span<const RatVec> points,
                                       const RankCheckOptions& rank_opts) {
  if (trials < 1) throw std::invalid_argument("trial count must be positive");
  if (degree < 1) throw std::invalid_argument("perturbation degree must be at least 1");

  std::vector<std::vector<unsigned>> monomials;
  monomials_up_to(sys.n, degree, monomials);

  const Rng master(seed);
  GenericityResult result;
  result.trials = trials;

  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.stream(static_cast<std::uint64_t>(trial));
    std::vector<PolyVectorField> fields;
    fields.reserve(sys.fields.size());
    for (const PolyVectorField& f : sys.fields) {
      std::vector<Polynomial> comps = f.components();
      for (Polynomial& comp : comps) {
        for (const auto& exps : monomials) {
          comp.add_term(exps, rng.rational_in(eps));
        }
      }
      fields.emplace_back(std::move(comps));
    }
    ControlAffineSystem perturbed(std::move(fields), sys.diffusion);

    RankCheckOptions opts = rank_opts;
    opts.probe_seed = rank_opts.probe_seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1));
    const RankReport report = check_condition_1(perturbed, points, opts);
    if (report.overall() == Verdict::pass) ++result.passes;
  }
  result.fraction = static_cast<double>(result.passes) / static_cast<double>(trials);
  return result;
}

}  // namespace statlin
