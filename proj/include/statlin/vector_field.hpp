/**
 * @file vector_field.hpp
 * @brief Polynomial vector fields on ℝⁿ: evaluation, Jacobians, Lie brackets.
 */
#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "statlin/polynomial.hpp"
#include "statlin/ratmat.hpp"

namespace statlin {

/// Vector field on ℝⁿ with polynomial components (all in n variables).
class PolyVectorField {
 public:
  PolyVectorField() = default;
  explicit PolyVectorField(std::vector<Polynomial> components);

  [[nodiscard]] static PolyVectorField zero(int n);
  /// The linear field x ↦ A x.
  [[nodiscard]] static PolyVectorField linear(const RatMatrix& a);
  /// The constant field x ↦ b.
  [[nodiscard]] static PolyVectorField constant(std::span<const Rat> b);

  [[nodiscard]] int dim() const { return static_cast<int>(comps_.size()); }
  [[nodiscard]] const Polynomial& comp(int i) const { return comps_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const std::vector<Polynomial>& components() const { return comps_; }
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] int degree() const;

  friend PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b);
  friend PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b);
  friend PolyVectorField operator*(const Rat& c, const PolyVectorField& a);
  friend bool operator==(const PolyVectorField& a, const PolyVectorField& b);

 private:
  std::vector<Polynomial> comps_;
};

/// Matrix of polynomials in a fixed number of variables (row-major).
class PolyMatrixMap {
 public:
  PolyMatrixMap() = default;
  PolyMatrixMap(int rows, int cols, int num_vars);
  PolyMatrixMap(int rows, int cols, std::vector<Polynomial> entries);

  [[nodiscard]] static PolyMatrixMap constant(const RatMatrix& m, int num_vars);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] int num_vars() const { return num_vars_; }
  [[nodiscard]] bool is_zero() const;

  Polynomial& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  [[nodiscard]] const Polynomial& at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

  [[nodiscard]] PolyMatrixMap transpose() const;
  [[nodiscard]] RatMatrix eval(std::span<const Rat> x) const;
  [[nodiscard]] Eigen::MatrixXd eval_d(const Eigen::VectorXd& x) const;

  friend PolyMatrixMap operator+(const PolyMatrixMap& a, const PolyMatrixMap& b);
  friend PolyMatrixMap operator-(const PolyMatrixMap& a, const PolyMatrixMap& b);
  friend PolyMatrixMap operator*(const PolyMatrixMap& a, const PolyMatrixMap& b);
  friend bool operator==(const PolyMatrixMap& a, const PolyMatrixMap& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  int num_vars_ = 0;
  std::vector<Polynomial> entries_;
};

/// Componentwise evaluation; exact at rational points.
[[nodiscard]] RatVec eval_field(const PolyVectorField& f, std::span<const Rat> m);
[[nodiscard]] Eigen::VectorXd eval_field_d(const PolyVectorField& f, const Eigen::VectorXd& m);

/// Jacobian matrix: entry (i,j) = ∂f_i/∂x_j.
[[nodiscard]] PolyMatrixMap jacobian(const PolyVectorField& f);

/// Lie bracket [f1,f2] = Df2·f1 − Df1·f2, computed symbolically.
[[nodiscard]] PolyVectorField lie_bracket(const PolyVectorField& f1, const PolyVectorField& f2);

/// Iterated adjoint: s = 0 returns f1, s ≥ 1 returns [f0, ad^{s-1} f0 · f1].
[[nodiscard]] PolyVectorField ad_iter(const PolyVectorField& f0, const PolyVectorField& f1, int s);

/// Jacobian-times-field as a polynomial field (Df scaled along g).
[[nodiscard]] PolyVectorField apply_jacobian(const PolyMatrixMap& df, const PolyVectorField& g);

}  // namespace statlin
