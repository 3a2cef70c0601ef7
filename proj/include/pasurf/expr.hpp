#pragma once

// Arithmetic expression language used by scene files.
//
// Grammar (lowest to highest precedence):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | function '(' sum ')' | '(' sum ')'
//
// Functions: sin cos tan sinh cosh tanh sech csch coth asin acos atan asinh
// exp log sqrt abs. Built-in constants: pi, e. Every other name must be
// declared when parsing.

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pasurf/errors.hpp"
#include "pasurf/jet.hpp"

namespace pasurf::expr {

enum class Op { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

enum class Function {
  Sin, Cos, Tan, Sinh, Cosh, Tanh, Sech, Csch, Coth,
  Asin, Acos, Atan, Asinh, Exp, Log, Sqrt, Abs
};

struct Node {
  Op op = Op::Number;
  double number = 0.0;
  int variable = -1;
  Function function = Function::Sin;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
  std::size_t offset = 0;  // byte offset of the node's first token
};

bool structurally_equal(const Node& a, const Node& b);

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::string_view source, std::size_t offset);
  std::size_t offset() const { return offset_; }
  const std::string& excerpt() const { return excerpt_; }

 private:
  std::size_t offset_;
  std::string excerpt_;
};

/// Immutable parsed expression. Cheap to copy; evaluation is thread-safe.
class Expr {
 public:
  Expr() = default;

  const Node& root() const { return *root_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& source() const { return source_; }

  /// Canonical, fully parenthesized text. parse(print()) reproduces the AST.
  std::string print() const;

  /// Evaluates with `bindings[i]` bound to names()[i].
  Jet2 eval(std::span<const Jet2> bindings) const;
  double eval_value(std::span<const double> values) const;

  bool references(int variable) const;

 private:
  friend Expr parse(std::string_view, std::vector<std::string>);
  std::shared_ptr<const Node> root_;
  std::vector<std::string> names_;
  std::string source_;
};

Expr parse(std::string_view source, std::vector<std::string> names);

/// Wraps an expression as a ScalarField over its declared names.
ScalarField to_field(const Expr& e);

/// Field over `inputs` (in that order). Every other declared name must be in
/// `constants` and is bound as a zero-derivative jet.
ScalarField to_field(const Expr& e, const std::vector<std::string>& inputs,
                     const std::map<std::string, double>& constants);

/// Parses `source` against inputs and constant names, then binds.
ScalarField compile(std::string_view source, const std::vector<std::string>& inputs,
                    const std::map<std::string, double>& constants = {});

std::string_view function_name(Function f);

}  // namespace pasurf::expr
