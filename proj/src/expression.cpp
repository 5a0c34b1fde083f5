#include "pulsedg/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "pulsedg/error.hpp"

namespace pulsedg {

namespace {

using cplx = std::complex<double>;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  cplx parse() {
    const cplx v = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression '" + std::string(text_) + "': " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  cplx expr() {
    cplx v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }
  cplx term() {
    cplx v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const cplx d = unary();
        if (d == cplx(0.0)) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }
  cplx unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  cplx power() {
    const cplx base = primary();
    if (eat('^')) {
      const cplx ex = unary();
      if (ex.imag() == 0.0 && base.imag() == 0.0 && (base.real() >= 0.0 || ex.real() == std::round(ex.real()))) {
        return std::pow(base.real(), ex.real());
      }
      return std::pow(base, ex);
    }
    return base;
  }
  cplx primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const cplx v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const char* first = text_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
      if (ec != std::errc()) fail("bad number");
      pos_ += static_cast<std::size_t>(ptr - first);
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "pi") return std::numbers::pi;
      if (name == "e") return std::numbers::e;
      if (name == "i") return cplx(0.0, 1.0);
      if (!eat('(')) fail("unknown name '" + std::string(name) + "'");
      const cplx a = expr();
      if (!eat(')')) fail("missing ')'");
      if (name == "exp") return std::exp(a);
      if (name == "log") return std::log(a);
      if (name == "sqrt") return std::sqrt(a);
      if (name == "sin") return std::sin(a);
      if (name == "cos") return std::cos(a);
      fail("unknown function '" + std::string(name) + "'");
    }
    fail("unexpected character");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::complex<double> evaluate_expression(std::string_view text) { return Parser(text).parse(); }

double evaluate_real_expression(std::string_view text) {
  const cplx v = evaluate_expression(text);
  if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real()))) {
    throw ConfigError("expression '" + std::string(text) + "' is not real");
  }
  return v.real();
}

}  // namespace pulsedg
