#include "statlin/vector_field.hpp"

#include <algorithm>

namespace statlin {

PolyVectorField::PolyVectorField(std::vector<Polynomial> components) : comps_(std::move(components)) {
  const int n = static_cast<int>(comps_.size());
  for (const Polynomial& p : comps_) {
    if (p.num_vars() != n) throw std::invalid_argument("field components must live in n variables");
  }
}

PolyVectorField PolyVectorField::zero(int n) {
  return PolyVectorField(std::vector<Polynomial>(static_cast<std::size_t>(n), Polynomial(n)));
}

PolyVectorField PolyVectorField::linear(const RatMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("linear field needs a square matrix");
  const int n = a.rows();
  std::vector<Polynomial> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Polynomial p(n);
    for (int j = 0; j < n; ++j) {
      if (sgn(a(i, j)) == 0) continue;
      p += a(i, j) * Polynomial::variable(n, j);
    }
    comps.push_back(std::move(p));
  }
  return PolyVectorField(std::move(comps));
}

PolyVectorField PolyVectorField::constant(std::span<const Rat> b) {
  const int n = static_cast<int>(b.size());
  std::vector<Polynomial> comps;
  comps.reserve(b.size());
  for (const Rat& c : b) comps.push_back(Polynomial::constant(n, c));
  return PolyVectorField(std::move(comps));
}

bool PolyVectorField::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

int PolyVectorField::degree() const {
  int d = -1;
  for (const Polynomial& p : comps_) d = std::max(d, p.degree());
  return d;
}

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("field dimension mismatch in +");
  std::vector<Polynomial> comps;
  comps.reserve(a.comps_.size());
  for (std::size_t i = 0; i < a.comps_.size(); ++i) comps.push_back(a.comps_[i] + b.comps_[i]);
  return PolyVectorField(std::move(comps));
}

PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("field dimension mismatch in -");
  std::vector<Polynomial> comps;
  comps.reserve(a.comps_.size());
  for (std::size_t i = 0; i < a.comps_.size(); ++i) comps.push_back(a.comps_[i] - b.comps_[i]);
  return PolyVectorField(std::move(comps));
}

PolyVectorField operator*(const Rat& c, const PolyVectorField& a) {
  std::vector<Polynomial> comps;
  comps.reserve(a.comps_.size());
  for (const Polynomial& p : a.comps_) comps.push_back(c * p);
  return PolyVectorField(std::move(comps));
}

bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
  return a.comps_ == b.comps_;
}

PolyMatrixMap::PolyMatrixMap(int rows, int cols, int num_vars)
    : rows_(rows), cols_(cols), num_vars_(num_vars),
      entries_(static_cast<std::size_t>(rows) * cols, Polynomial(num_vars)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix map dimension");
}

PolyMatrixMap::PolyMatrixMap(int rows, int cols, std::vector<Polynomial> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("entry count must equal rows*cols");
  }
  num_vars_ = entries_.empty() ? 0 : entries_.front().num_vars();
  for (const Polynomial& p : entries_) {
    if (p.num_vars() != num_vars_) throw std::invalid_argument("matrix map entries disagree on variable count");
  }
}

PolyMatrixMap PolyMatrixMap::constant(const RatMatrix& m, int num_vars) {
  PolyMatrixMap out(m.rows(), m.cols(), num_vars);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(i, j) = Polynomial::constant(num_vars, m(i, j));
  return out;
}

bool PolyMatrixMap::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

PolyMatrixMap PolyMatrixMap::transpose() const {
  PolyMatrixMap out(cols_, rows_, num_vars_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

RatMatrix PolyMatrixMap::eval(std::span<const Rat> x) const {
  RatMatrix out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = at(i, j).eval(x);
  return out;
}

Eigen::MatrixXd PolyMatrixMap::eval_d(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(rows_, cols_);
  std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = at(i, j).eval_d(xs);
  return out;
}

PolyMatrixMap operator+(const PolyMatrixMap& a, const PolyMatrixMap& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix map size mismatch in +");
  PolyMatrixMap out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] += b.entries_[i];
  return out;
}

PolyMatrixMap operator-(const PolyMatrixMap& a, const PolyMatrixMap& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix map size mismatch in -");
  PolyMatrixMap out = a;
  for (std::size_t i = 0; i < out.entries_.size(); ++i) out.entries_[i] -= b.entries_[i];
  return out;
}

PolyMatrixMap operator*(const PolyMatrixMap& a, const PolyMatrixMap& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix map size mismatch in *");
  PolyMatrixMap out(a.rows_, b.cols_, a.num_vars_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int k = 0; k < a.cols_; ++k) {
      const Polynomial& aik = a.at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < b.cols_; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  }
  return out;
}

bool operator==(const PolyMatrixMap& a, const PolyMatrixMap& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

RatVec eval_field(const PolyVectorField& f, std::span<const Rat> m) {
  if (static_cast<int>(m.size()) != f.dim()) throw std::invalid_argument("point dimension mismatch");
  RatVec out;
  out.reserve(m.size());
  for (int i = 0; i < f.dim(); ++i) out.push_back(f.comp(i).eval(m));
  return out;
}

Eigen::VectorXd eval_field_d(const PolyVectorField& f, const Eigen::VectorXd& m) {
  Eigen::VectorXd out(f.dim());
  std::span<const double> xs(m.data(), static_cast<std::size_t>(m.size()));
  for (int i = 0; i < f.dim(); ++i) out[i] = f.comp(i).eval_d(xs);
  return out;
}

PolyMatrixMap jacobian(const PolyVectorField& f) {
  const int n = f.dim();
  PolyMatrixMap out(n, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = f.comp(i).derivative(j);
  return out;
}

PolyVectorField apply_jacobian(const PolyMatrixMap& df, const PolyVectorField& g) {
  if (df.cols() != g.dim()) throw std::invalid_argument("jacobian/field dimension mismatch");
  std::vector<Polynomial> comps;
  comps.reserve(static_cast<std::size_t>(df.rows()));
  for (int i = 0; i < df.rows(); ++i) {
    Polynomial p(df.num_vars());
    for (int j = 0; j < df.cols(); ++j) p += df.at(i, j) * g.comp(j);
    comps.push_back(std::move(p));
  }
  return PolyVectorField(std::move(comps));
}

PolyVectorField lie_bracket(const PolyVectorField& f1, const PolyVectorField& f2) {
  if (f1.dim() != f2.dim()) throw std::invalid_argument("field dimension mismatch in bracket");
  return apply_jacobian(jacobian(f2), f1) - apply_jacobian(jacobian(f1), f2);
}

PolyVectorField ad_iter(const PolyVectorField& f0, const PolyVectorField& f1, int s) {
  if (s < 0) throw std::invalid_argument("adjoint order must be nonnegative");
  PolyVectorField acc = f1;
  for (int k = 0; k < s; ++k) acc = lie_bracket(f0, acc);
  return acc;
}

}  // namespace statlin
