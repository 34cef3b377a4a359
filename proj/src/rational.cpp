#include "statlin/rational.hpp"

#include <cctype>

namespace statlin {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("bare sign in rational literal: '" + std::string(text) + "'");

  std::string num;
  std::string den = "1";
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view p = s.substr(0, slash);
    std::string_view q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) {
      throw std::invalid_argument("malformed fraction: '" + std::string(text) + "'");
    }
    num = std::string(p);
    den = std::string(q);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    if (!ip.empty() && !all_digits(ip)) throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    if (!fp.empty() && !all_digits(fp)) throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    num = std::string(ip) + std::string(fp);
    if (num.empty()) throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    den = "1" + std::string(fp.size(), '0');
  } else {
    if (!all_digits(s)) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    num = std::string(s);
  }

  mpz_class n(num, 10);
  mpz_class d(den, 10);
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rat q(n, d);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

}  // namespace statlin
