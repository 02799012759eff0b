#include "fracinv/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fracinv {

struct Expression::Node
{
  enum class Kind { Number, Variable, Unary, Binary, Call } kind;
  double number = 0.0;
  char variable = 0;  // 'x', 'y', 't', 'a'
  char op = 0;        // + - * / ^ < l(<=) > g(>=)
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(const ExpressionScope& s) const
  {
    switch (kind) {
      case Kind::Number: return number;
      case Kind::Variable:
        switch (variable) {
          case 'x': return s.x;
          case 'y': return s.y;
          case 't': return s.t;
          default: return s.alpha;
        }
      case Kind::Unary: return -args[0]->eval(s);
      case Kind::Binary: {
        const double l = args[0]->eval(s), r = args[1]->eval(s);
        switch (op) {
          case '+': return l + r;
          case '-': return l - r;
          case '*': return l * r;
          case '/': return l / r;
          case '^': return std::pow(l, r);
          case '<': return l < r ? 1.0 : 0.0;
          case 'l': return l <= r ? 1.0 : 0.0;
          case '>': return l > r ? 1.0 : 0.0;
          default: return l >= r ? 1.0 : 0.0;
        }
      }
      case Kind::Call: {
        const double a = args[0]->eval(s);
        if (function == "sin") return std::sin(a);
        if (function == "cos") return std::cos(a);
        if (function == "tan") return std::tan(a);
        if (function == "exp") return std::exp(a);
        if (function == "log") return std::log(a);
        if (function == "sqrt") return std::sqrt(a);
        if (function == "abs") return std::abs(a);
        const double b = args[1]->eval(s);
        return function == "min" ? std::min(a, b) : std::max(a, b);
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

class Parser
{
public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse()
  {
    NodePtr root = comparison();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected character");
    return root;
  }

private:
  [[noreturn]] void fail(const std::string& why) const
  {
    throw std::invalid_argument("expression '" + text_ + "': " + why + " at offset " +
                                std::to_string(pos_));
  }

  void skip_space()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c)
  {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(char op, NodePtr l, NodePtr r)
  {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->args = {std::move(l), std::move(r)};
    return n;
  }

  NodePtr comparison()
  {
    NodePtr left = sum();
    while (true) {
      char op;
      if (accept('<'))
        op = accept('=') ? 'l' : '<';
      else if (accept('>'))
        op = accept('=') ? 'g' : '>';
      else
        return left;
      NodePtr right = sum();
      left = binary(op, std::move(left), std::move(right));
    }
  }

  NodePtr sum()
  {
    NodePtr left = product();
    while (true) {
      if (accept('+'))
        left = binary('+', left, product());
      else if (accept('-'))
        left = binary('-', left, product());
      else
        return left;
    }
  }

  NodePtr product()
  {
    NodePtr left = unary();
    while (true) {
      if (accept('*'))
        left = binary('*', left, unary());
      else if (accept('/'))
        left = binary('/', left, unary());
      else
        return left;
    }
  }

  NodePtr unary()
  {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Unary;
      n->args = {unary()};
      return n;
    }
    if (accept('+'))
      return unary();
    return power();
  }

  NodePtr power()
  {
    NodePtr base = primary();
    if (accept('^'))
      return binary('^', base, unary());  // right associative
    return base;
  }

  NodePtr primary()
  {
    skip_space();
    if (pos_ >= text_.size())
      fail("unexpected end");
    if (accept('(')) {
      NodePtr inner = comparison();
      if (!accept(')'))
        fail("missing ')'");
      return inner;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(text_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Number;
      n->number = value;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        name += text_[pos_++];
      return identifier(name);
    }
    fail("unexpected character");
  }

  NodePtr identifier(const std::string& name)
  {
    auto n = std::make_shared<Node>();
    if (name == "x" || name == "y" || name == "t" || name == "alpha") {
      n->kind = Node::Kind::Variable;
      n->variable = name == "alpha" ? 'a' : name[0];
      return n;
    }
    if (name == "pi" || name == "e") {
      n->kind = Node::Kind::Number;
      n->number = name == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    static const std::vector<std::string> unary_fns = {"sin", "cos", "tan", "exp",
                                                       "log", "sqrt", "abs"};
    const bool is_unary = std::find(unary_fns.begin(), unary_fns.end(), name) != unary_fns.end();
    const bool is_binary = name == "min" || name == "max";
    if (!is_unary && !is_binary)
      fail("unknown identifier '" + name + "'");
    if (!accept('('))
      fail("expected '(' after " + name);
    n->kind = Node::Kind::Call;
    n->function = name;
    n->args.push_back(comparison());
    if (is_binary) {
      if (!accept(','))
        fail("expected ',' in " + name);
      n->args.push_back(comparison());
    }
    if (!accept(')'))
      fail("missing ')' after arguments of " + name);
    return n;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

} // namespace

Expression::Expression(const std::string& source)
  : source_(source), root_(Parser(source).parse())
{}

Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(const ExpressionScope& scope) const
{
  return root_->eval(scope);
}

} // namespace fracinv
