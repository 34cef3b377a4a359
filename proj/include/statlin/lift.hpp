/**
 * @file lift.hpp
 * @brief Vector fields on mean-covariance space ℝⁿ × Sym⁺(n).
 *
 * A lifted field is the pair (f, B) acting as
 *     X = (m, P)  ↦  ( f(m),  Df(m) P + P Df(m)ᵀ + B(m) ),
 * with B a symmetric polynomial matrix stored by its upper triangle so that
 * symmetry is structural rather than checked.
 */
#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "statlin/ratmat.hpp"
#include "statlin/system.hpp"
#include "statlin/vector_field.hpp"

namespace statlin {

/// Symmetric n×n polynomial matrix; only entries with i ≤ j are stored.
class SymPolyMatrix {
 public:
  SymPolyMatrix() = default;
  SymPolyMatrix(int n, int num_vars);

  [[nodiscard]] static SymPolyMatrix zero(int n, int num_vars) { return SymPolyMatrix(n, num_vars); }
  /// Symmetric part assembly g·gᵀ from an n×d polynomial matrix.
  [[nodiscard]] static SymPolyMatrix gram(const PolyMatrixMap& g);
  [[nodiscard]] static SymPolyMatrix from_full(const PolyMatrixMap& full);

  [[nodiscard]] int size() const { return n_; }
  [[nodiscard]] int num_vars() const { return num_vars_; }
  [[nodiscard]] bool is_zero() const;

  Polynomial& at(int i, int j);
  [[nodiscard]] const Polynomial& at(int i, int j) const;

  [[nodiscard]] PolyMatrixMap to_full() const;
  [[nodiscard]] RatMatrix eval(std::span<const Rat> x) const;
  [[nodiscard]] Eigen::MatrixXd eval_d(const Eigen::VectorXd& x) const;

  friend bool operator==(const SymPolyMatrix& a, const SymPolyMatrix& b);

 private:
  [[nodiscard]] std::size_t index(int i, int j) const;

  int n_ = 0;
  int num_vars_ = 0;
  std::vector<Polynomial> upper_;
};

struct LiftedField {
  PolyVectorField f;
  SymPolyMatrix B;

  LiftedField() = default;
  LiftedField(PolyVectorField f_in, SymPolyMatrix b_in);

  [[nodiscard]] int dim() const { return f.dim(); }
  [[nodiscard]] bool is_zero() const { return f.is_zero() && B.is_zero(); }
};

/// Point (m, P) of mean-covariance space, exact coordinates.
struct StatePoint {
  RatVec m;
  RatMatrix P;

  StatePoint() = default;
  StatePoint(RatVec mean, RatMatrix cov);

  [[nodiscard]] int dim() const { return static_cast<int>(m.size()); }
  [[nodiscard]] bool is_positive_definite() const { return P.is_positive_definite(); }
};

/// Tangent value (v, Q) with Q symmetric.
struct TangentValue {
  RatVec v;
  RatMatrix Q;
};

/// Lift of the uncontrolled drift: (f0, B) with B = g gᵀ.
[[nodiscard]] LiftedField lift_drift(const PolyVectorField& f0, const PolyMatrixMap& g);

/// Lift of a control field: (fi, 0).
[[nodiscard]] LiftedField lift_control(const PolyVectorField& fi);

/// All lifted generators of a system: lift_drift first, then the lifted controls.
[[nodiscard]] std::vector<LiftedField> lift_system(const ControlAffineSystem& sys);

/**
 * @brief Symbolic bracket of two lifted fields, convention [F1,F2] = dF2·F1 − dF1·F2.
 *
 * The f-part is the flat bracket [f1,f2]; the B-part is
 *   dB2·f1 − dB1·f2 + Df2 B1 − Df1 B2 + B1 Df2ᵀ − B2 Df1ᵀ,
 * which is symmetric and is assembled directly in upper-triangle storage.
 */
[[nodiscard]] LiftedField lifted_bracket(const LiftedField& f1, const LiftedField& f2);

/// Exact evaluation (f(m), Df(m)P + PDf(m)ᵀ + B(m)); requires symmetric P.
[[nodiscard]] TangentValue eval_lifted(const LiftedField& field, const StatePoint& x);

/// Double-precision evaluation for numerical oracles and probes.
[[nodiscard]] Eigen::VectorXd eval_lifted_d(const LiftedField& field, const Eigen::VectorXd& m,
                                            const Eigen::MatrixXd& p);

/// The linear map (v, A) ↦ (v, AP + PAᵀ); requires P positive definite.
[[nodiscard]] TangentValue phi_p(std::span<const Rat> v, const RatMatrix& a, const RatMatrix& p);

/**
 * @brief Fixed linear chart on ℝⁿ × Sym(n), of dimension N = n + n(n+1)/2.
 *
 * Ordering: v first, then the diagonal of Q, then the strict upper triangle
 * row by row. Off-diagonal entries are not scaled; the chart is only used for
 * rank computations, which are basis-independent.
 */
[[nodiscard]] RatVec vectorize(const TangentValue& t);
[[nodiscard]] Eigen::VectorXd vectorize_d(const Eigen::VectorXd& v, const Eigen::MatrixXd& q);

/// Inverse chart: rebuilds (v, Q) with Q symmetric.
[[nodiscard]] std::pair<Eigen::VectorXd, Eigen::MatrixXd> unvectorize_d(const Eigen::VectorXd& z, int n);

[[nodiscard]] inline int lifted_dim(int n) { return n + n * (n + 1) / 2; }

}  // namespace statlin
