#pragma once

// Plain-text reader for polynomial-like expressions.
//
//   expr   := [+|-] term { (+|-) term }
//   term   := factor { [*] factor | / uint }
//   factor := uint | i | atom [^ uint] | ( constant expr )
//
// Whitespace is ignored. Atoms are supplied by the caller (x and y for Poly).

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "invstar/poly.hpp"
#include "invstar/scalar.hpp"

namespace invstar {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + what), pos_(pos), reason_(what) {}
  std::size_t position() const { return pos_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t pos_;
  std::string reason_;
};

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(pos_, what); }

  /// Unsigned decimal integer.
  mpz_class uint() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) {
      pos_ = start;
      fail("expected unsigned integer");
    }
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  int small_uint() {
    skip_ws();
    std::size_t start = pos_;
    mpz_class v = uint();
    if (!v.fits_sint_p() || v > 1000000) throw ParseError(start, "integer out of range");
    return static_cast<int>(v.get_si());
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

/// Recursive-descent reader over a ring V with Scalar scaling. AtomFn reads an
/// atom at the cursor and returns nullopt when the next token is not an atom.
template <class V, class AtomFn>
class ExprReader {
 public:
  ExprReader(Cursor& cur, AtomFn atom) : cur_(cur), atom_(atom) {}

  V expression(bool constants_only = false) {
    constants_only_ = constants_only;
    V acc{};
    bool negate = false;
    if (cur_.accept('-'))
      negate = true;
    else
      cur_.accept('+');
    for (;;) {
      V t = term();
      acc = negate ? acc - t : acc + t;
      if (cur_.accept('+'))
        negate = false;
      else if (cur_.accept('-'))
        negate = true;
      else
        break;
    }
    return acc;
  }

 private:
  bool starts_factor() {
    char c = cur_.peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'i' || c == '(' || is_atom_start(c);
  }
  bool is_atom_start(char c) { return !constants_only_ && std::isalpha(static_cast<unsigned char>(c)) && c != 'i'; }

  V term() {
    if (!starts_factor()) cur_.fail("expected a term");
    V acc = factor();
    for (;;) {
      if (cur_.accept('*')) {
        acc = acc * factor();
      } else if (cur_.accept('/')) {
        std::size_t at = cur_.pos();
        mpz_class d = cur_.uint();
        if (d == 0) throw ParseError(at, "division by zero");
        acc = acc * Scalar(Rational(mpz_class(1), d));
      } else if (starts_factor()) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  V factor() {
    char c = cur_.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return V(Scalar(Rational(cur_.uint())));
    }
    if (c == 'i') {
      cur_.accept('i');
      return V(Scalar::i());
    }
    if (c == '(') {
      cur_.accept('(');
      V inner = ExprReader(cur_, atom_).expression(true);
      cur_.expect(')');
      return inner;
    }
    if (constants_only_) cur_.fail("only constant coefficients may be parenthesized");
    std::optional<V> a = atom_(cur_);
    if (!a) cur_.fail(std::string("unexpected character '") + c + "'");
    if (cur_.accept('^')) {
      if (cur_.peek() == '-') cur_.fail("negative exponent");
      int e = cur_.small_uint();
      V base = *a;
      V out = V(Scalar(1));
      for (int k = 0; k < e; ++k) out = out * base;
      return out;
    }
    return *a;
  }

  Cursor& cur_;
  AtomFn atom_;
  bool constants_only_ = false;
};

template <class V, class AtomFn>
V read_expression(std::string_view text, AtomFn atom) {
  Cursor cur(text);
  if (cur.at_end()) cur.fail("empty expression");
  V v = ExprReader<V, AtomFn>(cur, atom).expression();
  if (!cur.at_end()) cur.fail(std::string("unexpected character '") + cur.peek() + "'");
  return v;
}

inline Poly parse_poly(std::string_view text) {
  auto atom = [](Cursor& cur) -> std::optional<Poly> {
    if (cur.accept('x')) return Poly::x();
    if (cur.accept('y')) return Poly::y();
    return std::nullopt;
  };
  return read_expression<Poly>(text, atom);
}

/// Any constant in the text grammar: "3/2", "-i/2", "1/2-3i".
inline Scalar parse_scalar(std::string_view text) {
  auto none = [](Cursor&) -> std::optional<Poly> { return std::nullopt; };
  Poly p = read_expression<Poly>(text, none);
  if (p.is_zero()) return Scalar(0);
  if (p.terms().size() != 1 || p.terms().begin()->first != Mono{}) throw ParseError(0, "not a constant");
  return p.terms().begin()->second;
}

/// Inverse of Scalar::exact(): "a/b+c/d*i".
inline Scalar parse_exact_scalar(std::string_view text) {
  Cursor cur(text);
  auto rational = [&cur]() {
    bool neg = cur.accept('-');
    mpz_class n = cur.uint();
    cur.expect('/');
    std::size_t at = cur.pos();
    mpz_class d = cur.uint();
    if (d == 0) throw ParseError(at, "zero denominator");
    Rational q(neg ? mpz_class(-n) : n, d);
    q.canonicalize();
    return q;
  };
  Rational re = rational();
  bool neg = false;
  if (cur.accept('-'))
    neg = true;
  else
    cur.expect('+');
  Rational im = rational();
  cur.expect('*');
  cur.expect('i');
  if (!cur.at_end()) cur.fail("trailing characters");
  return {re, neg ? Rational(-im) : im};
}

}  // namespace invstar
