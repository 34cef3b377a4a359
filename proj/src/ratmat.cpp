#include "statlin/ratmat.hpp"

namespace statlin {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool RatMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool RatMatrix::is_zero() const {
  for (const Rat& q : a_)
    if (sgn(q) != 0) return false;
  return true;
}

bool RatMatrix::is_positive_definite() const {
  if (rows_ != cols_ || !is_symmetric()) return false;
  // Sylvester criterion on leading principal minors.
  for (int k = 1; k <= rows_; ++k) {
    RatMatrix sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = (*this)(i, j);
    if (sgn(sub.determinant()) <= 0) return false;
  }
  return true;
}

std::optional<RatMatrix> RatMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  const int n = rows_;
  RatMatrix work = *this;
  RatMatrix inv = RatMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (sgn(work(r, col)) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rat p = work(col, col);
    for (int j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Rat factor = work(r, col);
      if (sgn(factor) == 0) continue;
      for (int j = 0; j < n; ++j) {
        work(r, j) -= factor * work(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

Rat RatMatrix::determinant() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  const int n = rows_;
  RatMatrix work = *this;
  Rat det(1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (sgn(work(r, col)) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return Rat(0);
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(work(pivot, j), work(col, j));
      det = -det;
    }
    det *= work(col, col);
    const Rat p = work(col, col);
    for (int r = col + 1; r < n; ++r) {
      const Rat factor = work(r, col) / p;
      if (sgn(factor) == 0) continue;
      for (int j = col; j < n; ++j) work(r, j) -= factor * work(col, j);
    }
  }
  return det;
}

Eigen::MatrixXd RatMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = statlin::to_double((*this)(i, j));
  return m;
}

RatMatrix operator+(const RatMatrix& x, const RatMatrix& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("matrix size mismatch in +");
  RatMatrix out = x;
  for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += y.a_[i];
  return out;
}

RatMatrix operator-(const RatMatrix& x, const RatMatrix& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("matrix size mismatch in -");
  RatMatrix out = x;
  for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= y.a_[i];
  return out;
}

RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
  if (x.cols_ != y.rows_) throw std::invalid_argument("matrix size mismatch in *");
  RatMatrix out(x.rows_, y.cols_);
  for (int i = 0; i < x.rows_; ++i) {
    for (int k = 0; k < x.cols_; ++k) {
      const Rat& xik = x(i, k);
      if (sgn(xik) == 0) continue;
      for (int j = 0; j < y.cols_; ++j) out(i, j) += xik * y(k, j);
    }
  }
  return out;
}

RatMatrix operator*(const Rat& c, const RatMatrix& x) {
  RatMatrix out = x;
  for (Rat& q : out.a_) q *= c;
  return out;
}

bool operator==(const RatMatrix& x, const RatMatrix& y) {
  return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
}

RatVec mat_vec(const RatMatrix& a, std::span<const Rat> x) {
  if (a.cols() != static_cast<int>(x.size())) throw std::invalid_argument("matrix/vector size mismatch");
  RatVec out(static_cast<std::size_t>(a.rows()), Rat(0));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out[i] += a(i, j) * x[j];
  return out;
}

Eigen::VectorXd to_double(std::span<const Rat> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = to_double(v[i]);
  return out;
}

bool RationalRowReducer::add(RatVec v) {
  if (!rows_.empty() && rows_.front().second.size() != v.size()) {
    throw std::invalid_argument("row length mismatch in rank tracking");
  }
  for (const auto& [pivot, row] : rows_) {
    const Rat& c = v[pivot];
    if (sgn(c) == 0) continue;
    const Rat factor = c;  // pivot entries are normalized to 1
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= factor * row[j];
  }
  int pivot = -1;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (sgn(v[j]) != 0) {
      pivot = static_cast<int>(j);
      break;
    }
  }
  if (pivot < 0) return false;
  const Rat p = v[pivot];
  for (Rat& q : v) q /= p;
  rows_.emplace_back(pivot, std::move(v));
  return true;
}

int exact_rank(std::span<const RatVec> vectors) {
  RationalRowReducer red;
  for (const RatVec& v : vectors) red.add(v);
  return red.rank();
}

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double top = sv(0);
  if (!(top > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * top) ++rank;
  }
  return rank;
}

int numerical_rank(std::span<const RatVec> vectors, double tol) {
  if (vectors.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(vectors.front().size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = 0; j < vectors[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(vectors[i][j]);
    }
  }
  return numerical_rank(m, tol);
}

}  // namespace statlin
