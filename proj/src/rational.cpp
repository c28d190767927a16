#include "isocalc/rational.hpp"

#include <sstream>

namespace isocalc {

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

std::string to_string(const Coefficient& c) {
  if (c.im == 0) return to_string(c.re);
  std::string s = to_string(c.re);
  s += (c.im < 0 ? " - " : " + ");
  Rational a = c.im < 0 ? Rational(-c.im) : c.im;
  if (a != 1) s += to_string(a) + "*";
  s += "i";
  return s;
}

double to_double(const Rational& q) {
  return static_cast<double>(numerator(q)) / static_cast<double>(denominator(q));
}

std::optional<Rational> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  try {
    if (s.find('.') != std::string::npos) return std::nullopt;
    if (slash == std::string::npos) {
      return Rational(BigInt(s));
    }
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) return std::nullopt;
    return Rational(num, den);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace isocalc
