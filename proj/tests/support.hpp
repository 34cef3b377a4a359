// Shared test helpers: random generators and finite-difference oracles.
//
// The finite-difference bracket oracles are intentionally independent of the
// symbolic bracket implementations: they only use pointwise double-precision
// evaluation of fields, so they can arbitrate signs and formulas.
#pragma once

#include <Eigen/Dense>

#include <vector>

#include "statlin/lift.hpp"
#include "statlin/rng.hpp"
#include "statlin/system.hpp"
#include "statlin/vector_field.hpp"

namespace statlin::testing {

inline Polynomial random_polynomial(Rng& rng, int n, int max_degree, double keep_prob = 0.6) {
  Polynomial p(n);
  std::vector<unsigned> exps(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == n - 1) {
      exps[static_cast<std::size_t>(var)] = static_cast<unsigned>(remaining);
      if (rng.uniform01() < keep_prob) p.add_term(exps, rng.rational(4, 4));
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      exps[static_cast<std::size_t>(var)] = static_cast<unsigned>(e);
      self(self, var + 1, remaining - e);
    }
  };
  for (int total = 0; total <= max_degree; ++total) rec(rec, 0, total);
  return p;
}

inline PolyVectorField random_field(Rng& rng, int n, int max_degree) {
  std::vector<Polynomial> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) comps.push_back(random_polynomial(rng, n, max_degree));
  return PolyVectorField(std::move(comps));
}

inline ControlAffineSystem random_system(Rng& rng, int n, int m_u, int d, int max_degree,
                                         int diffusion_degree = 1) {
  std::vector<PolyVectorField> fields;
  for (int i = 0; i <= m_u; ++i) fields.push_back(random_field(rng, n, max_degree));
  PolyMatrixMap g(n, d, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c) g.at(r, c) = random_polynomial(rng, n, diffusion_degree);
  return ControlAffineSystem(std::move(fields), std::move(g));
}

inline RatMatrix random_matrix(Rng& rng, int rows, int cols, std::int64_t max_num = 4,
                               std::int64_t max_den = 4) {
  RatMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.rational(max_num, max_den);
  return m;
}

// --- Finite-difference oracles -------------------------------------------

/// Central-difference Jacobian of a callable ℝ^k → ℝ^k.
template <class Fn>
Eigen::MatrixXd fd_jacobian(const Fn& f, const Eigen::VectorXd& x, double h) {
  const Eigen::VectorXd base = f(x);
  Eigen::MatrixXd jac(base.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[k] += h;
    xm[k] -= h;
    jac.col(k) = (f(xp) - f(xm)) / (2 * h);
  }
  return jac;
}

/// Numeric flat bracket Df2·f1 − Df1·f2 at a point, via FD Jacobians.
inline Eigen::VectorXd fd_bracket_flat(const PolyVectorField& f1, const PolyVectorField& f2,
                                       const Eigen::VectorXd& x, double h = 1e-5) {
  auto e1 = [&](const Eigen::VectorXd& p) { return eval_field_d(f1, p); };
  auto e2 = [&](const Eigen::VectorXd& p) { return eval_field_d(f2, p); };
  return fd_jacobian(e2, x, h) * e1(x) - fd_jacobian(e1, x, h) * e2(x);
}

/// Numeric lifted bracket on the vectorized chart of ℝⁿ × Sym(n).
inline Eigen::VectorXd fd_bracket_lifted(const LiftedField& f1, const LiftedField& f2,
                                         const Eigen::VectorXd& m, const Eigen::MatrixXd& p,
                                         double h = 1e-5) {
  const int n = static_cast<int>(m.size());
  auto flow = [&](const LiftedField& field) {
    return [&field, n](const Eigen::VectorXd& z) {
      const auto [mm, pp] = unvectorize_d(z, n);
      return eval_lifted_d(field, mm, pp);
    };
  };
  const Eigen::VectorXd z = vectorize_d(m, p);
  auto g1 = flow(f1);
  auto g2 = flow(f2);
  return fd_jacobian(g2, z, h) * g1(z) - fd_jacobian(g1, z, h) * g2(z);
}

inline double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

inline double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

}  // namespace statlin::testing
