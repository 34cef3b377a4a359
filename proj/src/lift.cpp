#include "statlin/lift.hpp"

#include <algorithm>

namespace statlin {

SymPolyMatrix::SymPolyMatrix(int n, int num_vars)
    : n_(n), num_vars_(num_vars),
      upper_(static_cast<std::size_t>(n) * (n + 1) / 2, Polynomial(num_vars)) {
  if (n < 0) throw std::invalid_argument("negative symmetric matrix size");
}

std::size_t SymPolyMatrix::index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle: row i starts after i full rows minus the skipped lower part.
  return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
}

Polynomial& SymPolyMatrix::at(int i, int j) { return upper_[index(i, j)]; }
const Polynomial& SymPolyMatrix::at(int i, int j) const { return upper_[index(i, j)]; }

bool SymPolyMatrix::is_zero() const {
  return std::all_of(upper_.begin(), upper_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

SymPolyMatrix SymPolyMatrix::gram(const PolyMatrixMap& g) {
  const int n = g.rows();
  SymPolyMatrix out(n, g.num_vars());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Polynomial acc(g.num_vars());
      for (int k = 0; k < g.cols(); ++k) acc += g.at(i, k) * g.at(j, k);
      out.at(i, j) = std::move(acc);
    }
  }
  return out;
}

SymPolyMatrix SymPolyMatrix::from_full(const PolyMatrixMap& full) {
  if (full.rows() != full.cols()) throw std::invalid_argument("symmetric storage needs a square matrix");
  SymPolyMatrix out(full.rows(), full.num_vars());
  for (int i = 0; i < full.rows(); ++i) {
    for (int j = i; j < full.cols(); ++j) {
      if (!(full.at(i, j) == full.at(j, i))) throw std::invalid_argument("matrix is not symmetric");
      out.at(i, j) = full.at(i, j);
    }
  }
  return out;
}

PolyMatrixMap SymPolyMatrix::to_full() const {
  PolyMatrixMap out(n_, n_, num_vars_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out.at(i, j) = at(i, j);
  return out;
}

RatMatrix SymPolyMatrix::eval(std::span<const Rat> x) const {
  RatMatrix out(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      Rat value = at(i, j).eval(x);
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

Eigen::MatrixXd SymPolyMatrix::eval_d(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(n_, n_);
  std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      const double value = at(i, j).eval_d(xs);
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

bool operator==(const SymPolyMatrix& a, const SymPolyMatrix& b) {
  return a.n_ == b.n_ && a.upper_ == b.upper_;
}

LiftedField::LiftedField(PolyVectorField f_in, SymPolyMatrix b_in) : f(std::move(f_in)), B(std::move(b_in)) {
  if (B.size() != f.dim()) throw std::invalid_argument("lifted field parts disagree on dimension");
}

StatePoint::StatePoint(RatVec mean, RatMatrix cov) : m(std::move(mean)), P(std::move(cov)) {
  if (P.rows() != P.cols() || P.rows() != static_cast<int>(m.size())) {
    throw std::invalid_argument("state point dimensions inconsistent");
  }
  if (!P.is_symmetric()) throw std::invalid_argument("state covariance must be symmetric");
}

LiftedField lift_drift(const PolyVectorField& f0, const PolyMatrixMap& g) {
  if (g.rows() != f0.dim()) throw std::invalid_argument("diffusion row count must equal state dimension");
  return LiftedField(f0, SymPolyMatrix::gram(g));
}

LiftedField lift_control(const PolyVectorField& fi) {
  return LiftedField(fi, SymPolyMatrix::zero(fi.dim(), fi.dim()));
}

std::vector<LiftedField> lift_system(const ControlAffineSystem& sys) {
  std::vector<LiftedField> out;
  out.reserve(sys.fields.size());
  out.push_back(lift_drift(sys.drift(), sys.diffusion));
  for (int i = 0; i < sys.m_u; ++i) out.push_back(lift_control(sys.control_field(i)));
  return out;
}

namespace {

/// Directional derivative dB·f of a symmetric polynomial matrix, entrywise.
SymPolyMatrix directional_derivative(const SymPolyMatrix& b, const PolyVectorField& f) {
  const int n = b.size();
  SymPolyMatrix out(n, b.num_vars());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Polynomial acc(b.num_vars());
      for (int k = 0; k < n; ++k) acc += b.at(i, j).derivative(k) * f.comp(k);
      out.at(i, j) = std::move(acc);
    }
  }
  return out;
}

}  // namespace

LiftedField lifted_bracket(const LiftedField& f1, const LiftedField& f2) {
  if (f1.dim() != f2.dim()) throw std::invalid_argument("lifted field dimension mismatch in bracket");
  const int n = f1.dim();

  PolyVectorField flat = lie_bracket(f1.f, f2.f);

  const SymPolyMatrix db2_f1 = directional_derivative(f2.B, f1.f);
  const SymPolyMatrix db1_f2 = directional_derivative(f1.B, f2.f);
  // M = Df2 B1 − Df1 B2; the bracket's B-part is dB2·f1 − dB1·f2 + M + Mᵀ.
  const PolyMatrixMap m = jacobian(f2.f) * f1.B.to_full() - jacobian(f1.f) * f2.B.to_full();

  SymPolyMatrix b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      b.at(i, j) = db2_f1.at(i, j) - db1_f2.at(i, j) + m.at(i, j) + m.at(j, i);
    }
  }
  return LiftedField(std::move(flat), std::move(b));
}

TangentValue eval_lifted(const LiftedField& field, const StatePoint& x) {
  if (field.dim() != x.dim()) throw std::invalid_argument("lifted evaluation dimension mismatch");
  if (!x.P.is_symmetric()) throw std::invalid_argument("covariance must be symmetric");

  TangentValue out;
  out.v = eval_field(field.f, x.m);
  const RatMatrix df = jacobian(field.f).eval(x.m);
  out.Q = df * x.P + x.P * df.transpose() + field.B.eval(x.m);
  return out;
}

Eigen::VectorXd eval_lifted_d(const LiftedField& field, const Eigen::VectorXd& m, const Eigen::MatrixXd& p) {
  const Eigen::VectorXd v = eval_field_d(field.f, m);
  const Eigen::MatrixXd df = jacobian(field.f).eval_d(m);
  const Eigen::MatrixXd q = df * p + p * df.transpose() + field.B.eval_d(m);
  return vectorize_d(v, q);
}

TangentValue phi_p(std::span<const Rat> v, const RatMatrix& a, const RatMatrix& p) {
  if (!p.is_positive_definite()) throw std::domain_error("phi_p requires positive definite P");
  if (a.rows() != p.rows() || a.cols() != p.cols() || static_cast<int>(v.size()) != p.rows()) {
    throw std::invalid_argument("phi_p dimension mismatch");
  }
  TangentValue out;
  out.v.assign(v.begin(), v.end());
  out.Q = a * p + p * a.transpose();
  return out;
}

RatVec vectorize(const TangentValue& t) {
  const int n = static_cast<int>(t.v.size());
  RatVec out;
  out.reserve(static_cast<std::size_t>(lifted_dim(n)));
  out.insert(out.end(), t.v.begin(), t.v.end());
  for (int i = 0; i < n; ++i) out.push_back(t.Q(i, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(t.Q(i, j));
  return out;
}

Eigen::VectorXd vectorize_d(const Eigen::VectorXd& v, const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(v.size());
  Eigen::VectorXd out(lifted_dim(n));
  int at = 0;
  for (int i = 0; i < n; ++i) out[at++] = v[i];
  for (int i = 0; i < n; ++i) out[at++] = q(i, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out[at++] = q(i, j);
  return out;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> unvectorize_d(const Eigen::VectorXd& z, int n) {
  if (z.size() != lifted_dim(n)) throw std::invalid_argument("vectorized state has wrong length");
  Eigen::VectorXd v(n);
  Eigen::MatrixXd q(n, n);
  int at = 0;
  for (int i = 0; i < n; ++i) v[i] = z[at++];
  for (int i = 0; i < n; ++i) q(i, i) = z[at++];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      q(i, j) = z[at];
      q(j, i) = z[at];
      ++at;
    }
  }
  return {std::move(v), std::move(q)};
}

}  // namespace statlin
