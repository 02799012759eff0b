#pragma once

#include <memory>
#include <string>

namespace fracinv {

/// Variables an expression may reference.
struct ExpressionScope
{
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  double alpha = 0.0;
};

/**
 * Small arithmetic expression compiled once and evaluated many times.
 *
 * Grammar: + - * / ^, unary minus, parentheses, comparison operators
 * (< <= > >=, yielding 0 or 1), numeric literals, the variables x y t alpha,
 * the constants pi and e, and the functions sin cos tan exp log sqrt abs
 * min max.
 */
class Expression
{
public:
  explicit Expression(const std::string& source);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(const ExpressionScope& scope) const;
  const std::string& source() const { return source_; }

  struct Node;

private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

} // namespace fracinv
