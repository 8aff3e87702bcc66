#include "dq/expr.hpp"

#include <cctype>

namespace dq {

namespace {

class Parser {
 public:
  Parser(const std::string& s, int dim) : s_(s), dim_(dim) {}

  Poly parse() {
    Poly p = expression();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  Poly expression() {
    skip_ws();
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = (take() == '-');
    Poly p = term();
    if (neg) p = -p;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return p;
      take();
      Poly t = term();
      p = (c == '+') ? p + t : p - t;
    }
  }

  Poly term() {
    Poly p = factor();
    for (;;) {
      skip_ws();
      if (peek() != '*') return p;
      take();
      p = p * factor();
    }
  }

  Poly factor() {
    Poly base = atom();
    skip_ws();
    if (peek() != '^') return base;
    take();
    skip_ws();
    long e = integer();
    if (e < 0) fail("negative exponent");
    Poly p = Poly::constant(dim_, 1);
    for (long i = 0; i < e; ++i) p = p * base;
    return p;
  }

  Poly atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      take();
      Poly p = expression();
      skip_ws();
      if (take() != ')') fail("expected )");
      return p;
    }
    if (c == 'x') {
      take();
      long i = integer();
      if (i < 1 || i > dim_) fail("variable index out of range for dimension " + std::to_string(dim_));
      return Poly::variable(dim_, static_cast<int>(i) - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Poly::constant(dim_, Rational(integer()));
    if (c == '-') {  // unary minus inside a product
      take();
      return -factor();
    }
    fail("unexpected character");
    return Poly(dim_);
  }

  long integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (take() - '0');
      if (v > 1000000000L) fail("integer literal too large");
    }
    return v;
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char take() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("parse error at position " + std::to_string(pos_) + ": " + why + " in \"" + s_ + "\"");
  }

  const std::string& s_;
  int dim_;
  size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, int dim) {
  if (dim <= 0) throw DimensionError("dimension must be positive");
  return Parser(text, dim).parse();
}

}  // namespace dq
