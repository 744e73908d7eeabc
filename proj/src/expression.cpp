#include "vfrac/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace vfrac {

class ExpressionParser {
public:
  ExpressionParser(std::string_view text, int dimension, Expression& out)
      : text_(text), dimension_(dimension), out_(out) {}

  void run() {
    expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
  }

private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::parse, "formula column " + std::to_string(pos_ + 1) + ": " + msg,
                std::string(text_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(Op op, int delta, int axis = 0, double value = 0.0) {
    out_.program_.push_back({op, axis, value});
    depth_ += delta;
    out_.max_stack_ = std::max(out_.max_stack_, depth_);
  }

  void expr() {
    term();
    for (;;) {
      if (accept('+')) { term(); emit(Op::add, -1); }
      else if (accept('-')) { term(); emit(Op::sub, -1); }
      else return;
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) { unary(); emit(Op::mul, -1); }
      else if (accept('/')) { unary(); emit(Op::div, -1); }
      else return;
    }
  }

  void unary() {
    if (accept('-')) { unary(); emit(Op::neg, 0); return; }
    if (accept('+')) { unary(); return; }
    power();
  }

  void power() {
    primary();
    if (accept('^')) { unary(); emit(Op::pow, -1); }
  }

  void primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') { number(); return; }
    if (accept('(')) {
      expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) { identifier(); return; }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  void number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    emit(Op::constant, +1, 0, v);
  }

  void identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "pi") { emit(Op::constant, +1, 0, M_PI); return; }
    if ((name[0] == 'x' || name[0] == 'y') && name.size() == 2 &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      const int axis = name[1] - '1';
      if (axis < 0 || axis >= dimension_) {
        pos_ = start;
        fail("coordinate '" + std::string(name) + "' exceeds dimension " + std::to_string(dimension_));
      }
      if (name[0] == 'x') {
        out_.uses_x_ = true;
        emit(Op::x, +1, axis);
      } else {
        out_.uses_y_ = true;
        emit(Op::y, +1, axis);
      }
      return;
    }
    Op fn;
    if (name == "exp") fn = Op::exp;
    else if (name == "abs") fn = Op::abs;
    else if (name == "sqrt") fn = Op::sqrt;
    else if (name == "log") fn = Op::log;
    else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!accept('(')) fail("expected '(' after function name");
    expr();
    if (!accept(')')) fail("expected ')'");
    emit(fn, 0);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int dimension_;
  int depth_ = 0;
  Expression& out_;
};

Expression Expression::parse(std::string_view source, int dimension) {
  Expression e;
  e.source_ = std::string(source);
  ExpressionParser(source, dimension, e).run();
  return e;
}

double Expression::operator()(const Point& x, const Point& y) const {
  double stack_buf[32] = {};
  std::vector<double> heap;
  double* st = stack_buf;
  if (max_stack_ > 32) {
    heap.resize(static_cast<std::size_t>(max_stack_));
    st = heap.data();
  }
  int top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::constant: st[top++] = in.value; break;
      case Op::x: st[top++] = x[in.axis]; break;
      case Op::y: st[top++] = y[in.axis]; break;
      case Op::add: --top; st[top - 1] += st[top]; break;
      case Op::sub: --top; st[top - 1] -= st[top]; break;
      case Op::mul: --top; st[top - 1] *= st[top]; break;
      case Op::div: --top; st[top - 1] /= st[top]; break;
      case Op::pow: --top; st[top - 1] = std::pow(st[top - 1], st[top]); break;
      case Op::neg: st[top - 1] = -st[top - 1]; break;
      case Op::exp: st[top - 1] = std::exp(st[top - 1]); break;
      case Op::abs: st[top - 1] = std::abs(st[top - 1]); break;
      case Op::sqrt: st[top - 1] = std::sqrt(st[top - 1]); break;
      case Op::log: st[top - 1] = std::log(st[top - 1]); break;
    }
  }
  return st[0];
}

}  // namespace vfrac
