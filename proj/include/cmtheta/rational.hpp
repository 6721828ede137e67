#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cmtheta/errors.hpp"

namespace cmtheta {

/// Exact rational number over 64-bit integers. Intermediate products use
/// 128-bit arithmetic; a result that does not fit throws std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Largest integer not exceeding the value.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  /// Representative of the value modulo 1 in [0, 1).
  Rational frac() const { return *this - Rational(floor()); }

  Rational operator-() const { return make(-static_cast<__int128>(num_), den_); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  /// Parses "p", "p/q" or a plain decimal such as "-1.25" (exactly).
  static Rational parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty()) throw ParseError("empty rational");
    if (auto slash = s.find('/'); slash != std::string::npos)
      return parse(s.substr(0, slash)) / parse(s.substr(slash + 1));

    bool negative = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
    __int128 num = 0;
    __int128 den = 1;
    bool seen_dot = false, seen_digit = false;
    for (; pos < s.size(); ++pos) {
      char c = s[pos];
      if (c == '.' && !seen_dot) {
        seen_dot = true;
      } else if (c >= '0' && c <= '9') {
        seen_digit = true;
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        if (num > INT64_MAX || den > INT64_MAX) throw ParseError("rational literal too long: " + s);
      } else {
        throw ParseError("bad rational literal: " + s);
      }
    }
    if (!seen_digit) throw ParseError("bad rational literal: " + s);
    return make(negative ? -num : num, den);
  }

 private:
  static Rational make(__int128 n, __int128 d) {
    Rational r;
    r.normalize(n, d);
    return r;
  }
  void assign(std::int64_t n, std::int64_t d) { normalize(n, d); }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void normalize(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
      throw std::overflow_error("Rational: 64-bit overflow");
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Element of Q(i): re + im·i with exact rational parts.
struct GaussianRational {
  Rational re;
  Rational im;

  constexpr GaussianRational() = default;
  GaussianRational(Rational r) : re(r) {}  // NOLINT: implicit embedding Q ⊂ Q(i)
  GaussianRational(std::int64_t r) : re(r) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(r), im(i) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  bool is_imaginary() const { return re.is_zero(); }
  bool is_gaussian_integer() const { return re.is_integer() && im.is_integer(); }

  GaussianRational conj() const { return {re, -im}; }
  /// Field norm z·conj(z).
  Rational norm() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

  GaussianRational operator-() const { return {-re, -im}; }
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.norm();
    if (n.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    GaussianRational t = a * b.conj();
    return {t.re / n, t.im / n};
  }
  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) = default;

  std::string str() const {
    if (im.is_zero()) return re.str();
    std::string imag = im.str() + "i";
    if (re.is_zero()) return imag;
    return re.str() + (im.sign() < 0 ? "" : "+") + imag;
  }
  friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) {
    return os << g.str();
  }

  /// Parses forms such as "3", "1/2+3/4i", "-i", "2/3 i", "0.5-1.5i".
  static GaussianRational parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty()) throw ParseError("empty Gaussian rational");
    if (s.back() != 'i') return {Rational::parse(s), Rational(0)};
    s.pop_back();
    // Split at the last sign that is not leading.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
      if (s[k] == '+' || s[k] == '-') {
        split = k;
        break;
      }
    std::string real_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string imag_part = split == std::string::npos ? s : s.substr(split);
    auto parse_coeff = [](const std::string& t) {
      if (t.empty() || t == "+") return Rational(1);
      if (t == "-") return Rational(-1);
      return Rational::parse(t);
    };
    Rational re = real_part.empty() ? Rational(0) : Rational::parse(real_part);
    return {re, parse_coeff(imag_part)};
  }
};

}  // namespace cmtheta
