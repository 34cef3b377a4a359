#include <doctest.h>

#include "statlin/polynomial.hpp"
#include "statlin/rational.hpp"

using namespace statlin;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rat(3, 4));
  CHECK(parse_rational("-2/6") == Rat(-1, 3));
  CHECK(parse_rational("7") == Rat(7));
  CHECK(parse_rational(" -5 ") == Rat(-5));
  CHECK(parse_rational("0.25") == Rat(1, 4));
  CHECK(parse_rational("-1.5") == Rat(-3, 2));
  CHECK(to_string(parse_rational("2/4")) == "1/2");
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
}

TEST_CASE("canonical form merges and orders terms") {
  // (x + y)^2 assembled out of order must equal x^2 + 2xy + y^2 term by term.
  Polynomial x = Polynomial::variable(2, 0);
  Polynomial y = Polynomial::variable(2, 1);
  Polynomial sum = x + y;
  Polynomial sq = sum * sum;

  Polynomial expected(2);
  expected.add_term({0, 2}, Rat(1));
  expected.add_term({1, 1}, Rat(2));
  expected.add_term({2, 0}, Rat(1));
  CHECK(sq == expected);
  CHECK(sq.terms().size() == 3);
  CHECK(sq.degree() == 2);

  // Graded-lex: x^2 before xy before y^2.
  CHECK(sq.terms()[0].exps == std::vector<unsigned>{2, 0});
  CHECK(sq.terms()[1].exps == std::vector<unsigned>{1, 1});
  CHECK(sq.terms()[2].exps == std::vector<unsigned>{0, 2});
}

TEST_CASE("zero coefficients are never stored") {
  Polynomial x = Polynomial::variable(1, 0);
  Polynomial diff = x - x;
  CHECK(diff.is_zero());
  CHECK(diff.terms().empty());
  CHECK(diff.degree() == -1);

  Polynomial p(1);
  p.add_term({3}, Rat(2));
  p.add_term({3}, Rat(-2));
  CHECK(p.is_zero());
}

TEST_CASE("derivative and evaluation are exact") {
  // p = 3/2 x0^2 x1 - x1^3
  Polynomial p(2);
  p.add_term({2, 1}, Rat(3, 2));
  p.add_term({0, 3}, Rat(-1));

  Polynomial dp0 = p.derivative(0);  // 3 x0 x1
  Polynomial expected0(2);
  expected0.add_term({1, 1}, Rat(3));
  CHECK(dp0 == expected0);

  Polynomial dp1 = p.derivative(1);  // 3/2 x0^2 - 3 x1^2
  Polynomial expected1(2);
  expected1.add_term({2, 0}, Rat(3, 2));
  expected1.add_term({0, 2}, Rat(-3));
  CHECK(dp1 == expected1);

  const std::vector<Rat> at{Rat(2, 3), Rat(-1, 2)};
  // 3/2 * 4/9 * (-1/2) - (-1/8) = -1/3 + 1/8 = -5/24
  CHECK(p.eval(at) == Rat(-5, 24));

  const double xs[] = {2.0 / 3.0, -0.5};
  CHECK(p.eval_d(xs) == doctest::Approx(-5.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("product degree and scalar multiples") {
  Polynomial x = Polynomial::variable(1, 0);
  Polynomial p = x * x * x;
  CHECK(p.degree() == 3);
  CHECK((Rat(0) * p).is_zero());
  CHECK((Rat(-2) * p).terms().front().coeff == Rat(-2));
  CHECK(p.to_string() == "x0^3");
}
