#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "bodenhu/error.hpp"

namespace bodenhu {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always held in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const BigInt& n) : value_(n) {}

  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    value_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den) : boost::multiprecision::cpp_rational(num, den);
  }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_integer() const { return denominator() == 1; }
  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  /// Largest integer <= *this.
  BigInt floor() const {
    BigInt q = numerator() / denominator();  // truncates toward zero
    if (sign() < 0 && !is_integer()) --q;
    return q;
  }

  /// Smallest integer >= *this.
  BigInt ceil() const {
    BigInt q = numerator() / denominator();
    if (sign() > 0 && !is_integer()) ++q;
    return q;
  }

  /// Converts an integral value; throws if *this is not an integer or does not fit.
  std::int64_t to_int64() const {
    if (!is_integer()) throw InvalidArgument("rational " + str() + " is not an integer");
    return numerator().convert_to<std::int64_t>();
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw InvalidArgument("division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.value_ = -a.value_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "p/q", or "p" when the denominator is one.
  std::string str() const {
    if (is_integer()) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  /// Accepts "p/q" (sign allowed on p only, q > 0) or a bare integer "p".
  static Rational parse(std::string_view text) {
    auto fail = [&] { return ParseError("malformed rational '" + std::string(text) + "'"); };
    auto parse_digits = [&](std::string_view digits) {
      if (digits.empty()) throw fail();
      BigInt v = 0;
      for (char c : digits) {
        if (c < '0' || c > '9') throw fail();
        v = v * 10 + (c - '0');
      }
      return v;
    };

    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
      negative = body.front() == '-';
      body.remove_prefix(1);
    }
    auto slash = body.find('/');
    BigInt num = parse_digits(body.substr(0, slash));
    BigInt den = 1;
    if (slash != std::string_view::npos) {
      den = parse_digits(body.substr(slash + 1));
      if (den == 0) throw fail();
    }
    if (negative) num = -num;
    return Rational(num, den);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  boost::multiprecision::cpp_rational value_;
};

}  // namespace bodenhu
