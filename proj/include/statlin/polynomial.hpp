/**
 * @file polynomial.hpp
 * @brief Multivariate polynomials over ℚ in canonical graded-lex form.
 *
 * Terms are kept sorted (total degree first, then lexicographic), merged, and
 * stripped of zero coefficients, so structural equality is mathematical
 * equality. All arithmetic is exact.
 */
#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "statlin/rational.hpp"

namespace statlin {

struct Term {
  std::vector<unsigned> exps;  // one exponent per variable
  Rat coeff;

  [[nodiscard]] unsigned total_degree() const {
    unsigned d = 0;
    for (unsigned e : exps) d += e;
    return d;
  }
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int num_vars);

  [[nodiscard]] static Polynomial constant(int num_vars, Rat c);
  [[nodiscard]] static Polynomial variable(int num_vars, int index);
  [[nodiscard]] static Polynomial monomial(int num_vars, std::vector<unsigned> exps, Rat c);

  [[nodiscard]] int num_vars() const { return num_vars_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const;
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }

  [[nodiscard]] Polynomial derivative(int var) const;

  [[nodiscard]] Rat eval(std::span<const Rat> x) const;
  [[nodiscard]] double eval_d(std::span<const double> x) const;

  /// Adds c to the coefficient of the given monomial (used by perturbations).
  void add_term(const std::vector<unsigned>& exps, const Rat& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rat& c, const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p);
  [[nodiscard]] std::string to_string() const;

 private:
  void normalize();

  int num_vars_ = 0;
  std::vector<Term> terms_;
};

/// Graded-lex ordering: higher total degree first, lex tiebreak.
[[nodiscard]] bool graded_lex_before(const Term& a, const Term& b);

}  // namespace statlin
