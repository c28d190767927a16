#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace isocalc {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Gaussian rational re + im*i. All coefficient arithmetic in the toolkit
/// is exact; norms are reported as squared moduli, which stay rational.
struct Coefficient {
  Rational re;
  Rational im;

  Coefficient() = default;
  Coefficient(Rational r) : re(std::move(r)) {}
  Coefficient(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  Coefficient(std::int64_t r) : re(r) {}
  Coefficient(std::int64_t r, std::int64_t i) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  Coefficient conj() const { return {re, -im}; }
  Rational abs2() const { return re * re + im * im; }

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    return {a.re - b.re, a.im - b.im};
  }
  Coefficient operator-() const { return {-re, -im}; }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Coefficient operator/(const Coefficient& a, const Coefficient& b) {
    Rational d = b.abs2();
    if (d == 0) throw std::domain_error("division by zero coefficient");
    Coefficient n = a * b.conj();
    return {n.re / d, n.im / d};
  }
  Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
  Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
  Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }

  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Coefficient& a, const Coefficient& b) {
    return !(a == b);
  }
  // lexicographic, used only for deterministic ordering of normal forms
  friend bool operator<(const Coefficient& a, const Coefficient& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  }
};

std::string to_string(const Rational& q);
std::string to_string(const Coefficient& c);
double to_double(const Rational& q);

/// Parses "p", "-p/q", etc. Rejects anything with a decimal point.
std::optional<Rational> parse_rational(const std::string& s);

}  // namespace isocalc
