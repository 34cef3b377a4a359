#include "statlin/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace statlin {

bool graded_lex_before(const Term& a, const Term& b) {
  const unsigned da = a.total_degree();
  const unsigned db = b.total_degree();
  if (da != db) return da > db;
  return a.exps > b.exps;
}

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0) throw std::invalid_argument("negative variable count");
}

Polynomial Polynomial::constant(int num_vars, Rat c) {
  Polynomial p(num_vars);
  if (sgn(c) != 0) p.terms_.push_back({std::vector<unsigned>(num_vars, 0), std::move(c)});
  return p;
}

Polynomial Polynomial::variable(int num_vars, int index) {
  if (index < 0 || index >= num_vars) throw std::invalid_argument("variable index out of range");
  Polynomial p(num_vars);
  std::vector<unsigned> e(num_vars, 0);
  e[index] = 1;
  p.terms_.push_back({std::move(e), Rat(1)});
  return p;
}

Polynomial Polynomial::monomial(int num_vars, std::vector<unsigned> exps, Rat c) {
  if (static_cast<int>(exps.size()) != num_vars) throw std::invalid_argument("exponent count mismatch");
  Polynomial p(num_vars);
  if (sgn(c) != 0) p.terms_.push_back({std::move(exps), std::move(c)});
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  // Leading term has the highest total degree under graded-lex.
  return static_cast<int>(terms_.front().total_degree());
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= num_vars_) throw std::invalid_argument("derivative variable out of range");
  Polynomial out(num_vars_);
  for (const Term& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term d = t;
    d.coeff *= static_cast<long>(t.exps[var]);
    d.exps[var] -= 1;
    out.terms_.push_back(std::move(d));
  }
  out.normalize();
  return out;
}

Rat Polynomial::eval(std::span<const Rat> x) const {
  if (static_cast<int>(x.size()) != num_vars_) throw std::invalid_argument("evaluation point dimension mismatch");
  Rat acc(0);
  for (const Term& t : terms_) {
    Rat m = t.coeff;
    for (int v = 0; v < num_vars_; ++v) {
      for (unsigned e = 0; e < t.exps[v]; ++e) m *= x[v];
    }
    acc += m;
  }
  return acc;
}

double Polynomial::eval_d(std::span<const double> x) const {
  double acc = 0.0;
  for (const Term& t : terms_) {
    double m = to_double(t.coeff);
    for (int v = 0; v < num_vars_; ++v) {
      const double xv = x[v];
      for (unsigned e = 0; e < t.exps[v]; ++e) m *= xv;
    }
    acc += m;
  }
  return acc;
}

void Polynomial::add_term(const std::vector<unsigned>& exps, const Rat& c) {
  if (static_cast<int>(exps.size()) != num_vars_) throw std::invalid_argument("exponent count mismatch");
  if (sgn(c) == 0) return;
  terms_.push_back({exps, c});
  normalize();
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (num_vars_ != other.num_vars_) throw std::invalid_argument("variable count mismatch in +");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  *this += -other;
  return *this;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  out += b;
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial out = a;
  out -= b;
  return out;
}

Polynomial operator-(const Polynomial& a) {
  Polynomial out = a;
  for (Term& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw std::invalid_argument("variable count mismatch in *");
  Polynomial out(a.num_vars_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& ta : a.terms_) {
    for (const Term& tb : b.terms_) {
      Term t;
      t.coeff = ta.coeff * tb.coeff;
      t.exps.resize(ta.exps.size());
      for (std::size_t v = 0; v < t.exps.size(); ++v) t.exps[v] = ta.exps[v] + tb.exps[v];
      out.terms_.push_back(std::move(t));
    }
  }
  out.normalize();
  return out;
}

Polynomial operator*(const Rat& c, const Polynomial& a) {
  Polynomial out(a.num_vars_);
  if (sgn(c) == 0) return out;
  out.terms_ = a.terms_;
  for (Term& t : out.terms_) t.coeff *= c;
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return graded_lex_before(a, b); });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (Term& t : terms_) {
    if (!merged.empty() && merged.back().exps == t.exps) {
      merged.back().coeff += t.coeff;
      if (sgn(merged.back().coeff) == 0) merged.pop_back();
    } else if (sgn(t.coeff) != 0) {
      merged.push_back(std::move(t));
    }
  }
  terms_ = std::move(merged);
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
  if (p.terms_.empty()) {
    os << "0";
    return os;
  }
  bool first = true;
  for (const Term& t : p.terms_) {
    Rat c = t.coeff;
    if (first) {
      if (sgn(c) < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
      if (sgn(c) < 0) c = -c;
    }
    first = false;
    const bool has_vars = t.total_degree() > 0;
    if (!has_vars || c != Rat(1)) {
      os << to_string(c);
      if (has_vars) os << "*";
    }
    bool first_var = true;
    for (std::size_t v = 0; v < t.exps.size(); ++v) {
      if (t.exps[v] == 0) continue;
      if (!first_var) os << "*";
      first_var = false;
      os << "x" << v;
      if (t.exps[v] > 1) os << "^" << t.exps[v];
    }
  }
  return os;
}

}  // namespace statlin
