/**
 * @file ratmat.hpp
 * @brief Dense rational matrices, exact rank, and exact linear solves.
 */
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "statlin/rational.hpp"

namespace statlin {

using RatVec = std::vector<Rat>;

/// Dense row-major matrix over the rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, Rat(0)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }

  [[nodiscard]] static RatMatrix identity(int n);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }

  Rat& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rat& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  [[nodiscard]] RatMatrix transpose() const;
  [[nodiscard]] bool is_symmetric() const;
  [[nodiscard]] bool is_zero() const;

  /// Exact positive-definiteness test for symmetric input (leading principal minors).
  [[nodiscard]] bool is_positive_definite() const;

  [[nodiscard]] std::optional<RatMatrix> inverse() const;
  [[nodiscard]] Rat determinant() const;

  [[nodiscard]] Eigen::MatrixXd to_double() const;

  friend RatMatrix operator+(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator-(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator*(const Rat& c, const RatMatrix& x);
  friend bool operator==(const RatMatrix& x, const RatMatrix& y);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rat> a_;
};

[[nodiscard]] RatVec mat_vec(const RatMatrix& a, std::span<const Rat> x);

[[nodiscard]] Eigen::VectorXd to_double(std::span<const Rat> v);

/**
 * @brief Incremental exact rank tracker over ℚ.
 *
 * Rows are reduced against previously accepted pivot rows; a row is accepted
 * only when a nonzero residual remains, i.e. when it enlarges the span.
 */
class RationalRowReducer {
 public:
  /// Returns true when the vector increased the rank.
  bool add(RatVec v);

  [[nodiscard]] int rank() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<std::pair<int, RatVec>> rows_;  // (pivot column, normalized row)
};

/// Exact rank of a family of rational vectors (empty family has rank 0).
[[nodiscard]] int exact_rank(std::span<const RatVec> vectors);

/// Numerical rank by SVD with a relative singular-value threshold.
[[nodiscard]] int numerical_rank(const Eigen::MatrixXd& m, double tol);

/// Convenience overload stacking rational vectors and thresholding in floats.
[[nodiscard]] int numerical_rank(std::span<const RatVec> vectors, double tol);

}  // namespace statlin
