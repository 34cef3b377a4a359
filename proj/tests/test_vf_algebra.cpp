#include <doctest.h>

#include "statlin/vector_field.hpp"
#include "support.hpp"

using namespace statlin;
using namespace statlin::testing;

namespace {

PolyVectorField field_1d(const Polynomial& p) { return PolyVectorField({p}); }

Polynomial poly_1d(std::initializer_list<std::pair<unsigned, Rat>> terms) {
  Polynomial p(1);
  for (const auto& [e, c] : terms) p.add_term({e}, c);
  return p;
}

// Independent univariate oracle: fields as coefficient arrays, bracket
// [f,g] = g' f - f' g computed with naive convolutions.
std::vector<Rat> uni_derivative(const std::vector<Rat>& f) {
  std::vector<Rat> d;
  for (std::size_t k = 1; k < f.size(); ++k) d.push_back(Rat(static_cast<long>(k)) * f[k]);
  return d;
}

std::vector<Rat> uni_multiply(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<Rat> uni_bracket(const std::vector<Rat>& f, const std::vector<Rat>& g) {
  const std::vector<Rat> left = uni_multiply(uni_derivative(g), f);
  const std::vector<Rat> right = uni_multiply(uni_derivative(f), g);
  std::vector<Rat> out(std::max(left.size(), right.size()), Rat(0));
  for (std::size_t i = 0; i < left.size(); ++i) out[i] += left[i];
  for (std::size_t i = 0; i < right.size(); ++i) out[i] -= right[i];
  while (!out.empty() && sgn(out.back()) == 0) out.pop_back();
  return out;
}

PolyVectorField from_uni(const std::vector<Rat>& coeffs) {
  Polynomial p(1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term({static_cast<unsigned>(k)}, coeffs[k]);
  return field_1d(p);
}

}  // namespace

TEST_CASE("eval_field examples") {
  const PolyVectorField sq = field_1d(poly_1d({{2, Rat(1)}}));
  const RatVec at3{Rat(3)};
  CHECK(eval_field(sq, at3) == RatVec{Rat(9)});

  // Rotation field (x1, -x0) at (1,0) -> (0,-1).
  Polynomial c0 = Polynomial::variable(2, 1);
  Polynomial c1 = Rat(-1) * Polynomial::variable(2, 0);
  const PolyVectorField rot({c0, c1});
  const RatVec p{Rat(1), Rat(0)};
  CHECK(eval_field(rot, p) == RatVec{Rat(0), Rat(-1)});

  const PolyVectorField zero = PolyVectorField::zero(2);
  CHECK(eval_field(zero, p) == RatVec{Rat(0), Rat(0)});

  const RatVec wrong{Rat(1)};
  CHECK_THROWS_AS((void)eval_field(rot, wrong), std::invalid_argument);
}

TEST_CASE("jacobian examples") {
  const PolyVectorField sq = field_1d(poly_1d({{2, Rat(1)}}));
  PolyMatrixMap j = jacobian(sq);
  CHECK(j.at(0, 0) == poly_1d({{1, Rat(2)}}));

  // f = (x0 x1, x0^2) -> [[x1, x0], [2 x0, 0]]
  Polynomial f0(2);
  f0.add_term({1, 1}, Rat(1));
  Polynomial f1(2);
  f1.add_term({2, 0}, Rat(1));
  PolyMatrixMap j2 = jacobian(PolyVectorField({f0, f1}));
  CHECK(j2.at(0, 0) == Polynomial::variable(2, 1));
  CHECK(j2.at(0, 1) == Polynomial::variable(2, 0));
  CHECK(j2.at(1, 0) == Rat(2) * Polynomial::variable(2, 0));
  CHECK(j2.at(1, 1).is_zero());

  RatVec b{Rat(5), Rat(-1)};
  CHECK(jacobian(PolyVectorField::constant(b)).is_zero());
}

TEST_CASE("lie_bracket frozen values") {
  // [f, f] = 0
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const PolyVectorField f = random_field(rng, 2, 3);
    CHECK(lie_bracket(f, f).is_zero());
  }

  // n=1: [x^2, 1] = -2x
  const PolyVectorField f0 = field_1d(poly_1d({{2, Rat(1)}}));
  const PolyVectorField f1 = field_1d(poly_1d({{0, Rat(1)}}));
  CHECK(lie_bracket(f0, f1) == field_1d(poly_1d({{1, Rat(-2)}})));

  // Linear fields x -> Ax, x -> Bx bracket to (BA - AB)x under this convention.
  Rng mrng(11);
  const RatMatrix a = random_matrix(mrng, 3, 3);
  const RatMatrix b = random_matrix(mrng, 3, 3);
  const PolyVectorField fa = PolyVectorField::linear(a);
  const PolyVectorField fb = PolyVectorField::linear(b);
  CHECK(lie_bracket(fa, fb) == PolyVectorField::linear(b * a - a * b));
}

TEST_CASE("ad_iter against the univariate oracle") {
  const std::vector<Rat> f0{Rat(0), Rat(0), Rat(1)};  // x^2
  const std::vector<Rat> f1{Rat(1)};                  // 1

  CHECK(ad_iter(from_uni(f0), from_uni(f1), 0) == from_uni(f1));

  const std::vector<Rat> ad1 = uni_bracket(f0, f1);
  CHECK(ad_iter(from_uni(f0), from_uni(f1), 1) == from_uni(ad1));
  CHECK(from_uni(ad1) == field_1d(poly_1d({{1, Rat(-2)}})));  // -2x

  const std::vector<Rat> ad2 = uni_bracket(f0, ad1);
  CHECK(ad_iter(from_uni(f0), from_uni(f1), 2) == from_uni(ad2));
  CHECK(from_uni(ad2) == field_1d(poly_1d({{2, Rat(2)}})));  // 2x^2

  // Deeper orders stay consistent with the oracle.
  std::vector<Rat> acc = f1;
  for (int s = 1; s <= 5; ++s) {
    acc = uni_bracket(f0, acc);
    CHECK(ad_iter(from_uni(f0), from_uni(f1), s) == from_uni(acc));
  }
}

TEST_CASE("antisymmetry and Jacobi identity hold exactly") {
  Rng rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const PolyVectorField f = random_field(rng, n, 3);
    const PolyVectorField g = random_field(rng, n, 3);
    const PolyVectorField h = random_field(rng, n, 3);

    CHECK(lie_bracket(f, g) == Rat(-1) * lie_bracket(g, f));

    const PolyVectorField jacobi =
        lie_bracket(f, lie_bracket(g, h)) + lie_bracket(g, lie_bracket(h, f)) + lie_bracket(h, lie_bracket(f, g));
    CHECK(jacobi.is_zero());
  }
}

TEST_CASE("finite-difference oracle confirms the bracket") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const PolyVectorField f = random_field(rng, n, 2);
    const PolyVectorField g = random_field(rng, n, 2);
    const PolyVectorField br = lie_bracket(f, g);

    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);

    const Eigen::VectorXd want = fd_bracket_flat(f, g, x);
    const Eigen::VectorXd got = eval_field_d(br, x);
    CHECK(rel_err(got, want) <= 1e-6);
  }
}

TEST_CASE("bracket Jacobian expansion at points") {
  // D[f1,f2] = D²f2·(f1,·) − D²f1·(f2,·) + Df2 Df1 − Df1 Df2, checked exactly
  // at random rational points by building Df·v as a fresh polynomial field.
  Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const PolyVectorField f1 = random_field(rng, n, 2);
    const PolyVectorField f2 = random_field(rng, n, 2);

    RatVec m;
    for (int i = 0; i < n; ++i) m.push_back(rng.rational(4, 4));

    auto hessian_slice = [&](const PolyVectorField& f, const RatVec& direction) {
      // D²f·(v,·) evaluated at m = Jacobian of (Df · const-v) at m.
      const PolyVectorField df_v = apply_jacobian(jacobian(f), PolyVectorField::constant(direction));
      return jacobian(df_v).eval(m);
    };

    const RatVec v1 = eval_field(f1, m);
    const RatVec v2 = eval_field(f2, m);
    const RatMatrix d1 = jacobian(f1).eval(m);
    const RatMatrix d2 = jacobian(f2).eval(m);

    const RatMatrix expansion = hessian_slice(f2, v1) - hessian_slice(f1, v2) + d2 * d1 - d1 * d2;
    CHECK(jacobian(lie_bracket(f1, f2)).eval(m) == expansion);
  }
}
