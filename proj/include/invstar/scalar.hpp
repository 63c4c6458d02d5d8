#pragma once

// Exact arithmetic in the Gaussian rationals Q(i).

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>

namespace invstar {

using Rational = mpq_class;

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero in Q(i)") {}
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DivisionByZero();
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// "p" or "p/q" with the sign on the numerator.
inline std::string rational_str(const Rational& q) { return q.get_str(); }

/// Always "p/q", including denominators of 1.
inline std::string rational_str_full(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// a + b*i with a, b exact rationals, kept in lowest terms by GMP.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar i() { return {Rational(0), Rational(1)}; }
  static Scalar ratio(long num, long den) { return Scalar(make_rational(num, den)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_imaginary() const { return sgn(re_) == 0 && sgn(im_) != 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  Scalar inverse() const {
    if (is_zero()) throw DivisionByZero();
    Rational n = norm();
    return {Rational(re_ / n), Rational(-im_ / n)};
  }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return {Rational(-a.re_), Rational(-a.im_)}; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  /// Canonical text: "3/2", "-i", "1/2i", "1/2-3i".
  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    if (sgn(re_) != 0) out = rational_str(re_);
    if (sgn(im_) != 0) {
      Rational mag = abs(im_);
      std::string body = mag == 1 ? "i" : rational_str(mag) + "i";
      if (sgn(im_) < 0)
        out += "-" + body;
      else
        out += out.empty() ? body : "+" + body;
    }
    return out;
  }

  /// Serialization form "a/b+c/d*i" used in JSON.
  std::string exact() const {
    std::string out = rational_str_full(re_);
    out += sgn(im_) < 0 ? "-" : "+";
    out += rational_str_full(abs(im_)) + "*i";
    return out;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

inline bool is_zero(const Scalar& s) { return s.is_zero(); }

}  // namespace invstar
