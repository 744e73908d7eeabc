#ifndef VFRAC_EXPRESSION_HPP
#define VFRAC_EXPRESSION_HPP

#include "vfrac/common.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vfrac {

/// Compiled arithmetic formula over x1..xn, y1..yn.
///
/// Grammar (whitespace insignificant):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('-' | '+') unary | power
///     power   := primary ('^' unary)?
///     primary := number | 'pi' | coord | func '(' expr ')' | '(' expr ')'
///     coord   := ('x' | 'y') digit          -- 1-based axis index
///     func    := 'exp' | 'abs' | 'sqrt' | 'log'
///
/// '^' is right associative and binds tighter than unary minus on its left,
/// so -2^2 == -4.
class Expression {
public:
  /// Throws Error(parse) with a 1-based column on malformed input or on a
  /// coordinate index above `dimension`.
  static Expression parse(std::string_view source, int dimension);

  double operator()(const Point& x, const Point& y) const;
  double operator()(const Point& x) const { return (*this)(x, Point::Zero()); }

  const std::string& source() const { return source_; }
  bool uses_x() const { return uses_x_; }
  bool uses_y() const { return uses_y_; }
  bool is_constant() const { return !uses_x_ && !uses_y_; }

private:
  enum class Op : unsigned char { constant, x, y, add, sub, mul, div, pow, neg, exp, abs, sqrt, log };
  struct Instr {
    Op op;
    int axis = 0;
    double value = 0.0;
  };
  friend class ExpressionParser;

  std::string source_;
  std::vector<Instr> program_;  // postfix
  int max_stack_ = 0;
  bool uses_x_ = false;
  bool uses_y_ = false;
};

}  // namespace vfrac

#endif
