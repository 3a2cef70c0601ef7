#include "pasurf/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <utility>

namespace pasurf::expr {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 17> kFunctions{{
    {"sin", Function::Sin},     {"cos", Function::Cos},     {"tan", Function::Tan},
    {"sinh", Function::Sinh},   {"cosh", Function::Cosh},   {"tanh", Function::Tanh},
    {"sech", Function::Sech},   {"csch", Function::Csch},   {"coth", Function::Coth},
    {"asin", Function::Asin},   {"acos", Function::Acos},   {"atan", Function::Atan},
    {"asinh", Function::Asinh}, {"exp", Function::Exp},     {"log", Function::Log},
    {"sqrt", Function::Sqrt},   {"abs", Function::Abs},
}};

std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (n == name) return f;
  return std::nullopt;
}

std::string excerpt_for(std::string_view source, std::size_t offset) {
  std::string out(source);
  out += '\n';
  out += std::string(offset, ' ');
  out += '^';
  return out;
}

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, src_.size(), {}});
        return out;
      }
      const char c = src_[pos_];
      const std::size_t start = pos_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number());
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({Tok::Name, start, src_.substr(start, pos_ - start)});
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::Plus; break;
          case '-': k = Tok::Minus; break;
          case '*': k = Tok::Star; break;
          case '/': k = Tok::Slash; break;
          case '^': k = Tok::Caret; break;
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case ',': k = Tok::Comma; break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'", src_, start);
        }
        ++pos_;
        out.push_back({k, start, src_.substr(start, 1)});
      }
    }
  }

 private:
  Token number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", src_, start);
    // Exponent only when digits follow, so "2*e" and "2e" stay unambiguous.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        digits();
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    return {Tok::Number, start, src_.substr(start, pos_ - start), std::strtod(text.c_str(), nullptr)};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& names)
      : src_(src), names_(names), toks_(Lexer(src).run()) {}

  std::unique_ptr<Node> run() {
    auto n = sum();
    if (peek().kind == Tok::RParen)
      throw ParseError("unbalanced parenthesis: unmatched ')'", src_, peek().offset);
    if (peek().kind != Tok::End) throw ParseError("unexpected token", src_, peek().offset);
    return n;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  static std::unique_ptr<Node> binary(Op op, std::unique_ptr<Node> l, std::unique_ptr<Node> r,
                                      std::size_t offset) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    n->offset = offset;
    return n;
  }

  std::unique_ptr<Node> sum() {
    auto lhs = product();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Op op = take().kind == Tok::Plus ? Op::Add : Op::Sub;
      const std::size_t off = lhs->offset;
      lhs = binary(op, std::move(lhs), product(), off);
    }
    return lhs;
  }

  std::unique_ptr<Node> product() {
    auto lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Op op = take().kind == Tok::Star ? Op::Mul : Op::Div;
      const std::size_t off = lhs->offset;
      lhs = binary(op, std::move(lhs), unary(), off);
    }
    return lhs;
  }

  std::unique_ptr<Node> unary() {
    if (peek().kind == Tok::Minus) {
      const std::size_t off = take().offset;
      auto n = std::make_unique<Node>();
      n->op = Op::Negate;
      n->lhs = unary();
      n->offset = off;
      return n;
    }
    return power();
  }

  std::unique_ptr<Node> power() {
    auto base = primary();
    if (peek().kind == Tok::Caret) {
      take();
      const std::size_t off = base->offset;
      return binary(Op::Pow, std::move(base), unary(), off);
    }
    return base;
  }

  std::unique_ptr<Node> primary() {
    const Token t = take();
    switch (t.kind) {
      case Tok::Number: {
        auto n = std::make_unique<Node>();
        n->op = Op::Number;
        n->number = t.number;
        n->offset = t.offset;
        return n;
      }
      case Tok::LParen: {
        auto inner = sum();
        if (peek().kind != Tok::RParen)
          throw ParseError("unbalanced parenthesis: '(' is never closed", src_, t.offset);
        take();
        return inner;
      }
      case Tok::Name:
        return name(t);
      case Tok::End:
        throw ParseError("unexpected end of expression", src_, t.offset);
      default:
        throw ParseError("unexpected token '" + std::string(t.text) + "'", src_, t.offset);
    }
  }

  std::unique_ptr<Node> name(const Token& t) {
    if (auto f = lookup_function(t.text)) {
      if (peek().kind != Tok::LParen)
        throw ParseError("function '" + std::string(t.text) + "' needs an argument", src_,
                         t.offset);
      const Token open = take();
      auto arg = sum();
      int count = 1;
      while (peek().kind == Tok::Comma) {
        take();
        sum();
        ++count;
      }
      if (peek().kind != Tok::RParen)
        throw ParseError("unbalanced parenthesis: '(' is never closed", src_, open.offset);
      take();
      if (count != 1)
        throw ParseError("arity mismatch: '" + std::string(t.text) + "' takes 1 argument, got " +
                             std::to_string(count),
                         src_, t.offset);
      auto n = std::make_unique<Node>();
      n->op = Op::Call;
      n->function = *f;
      n->lhs = std::move(arg);
      n->offset = t.offset;
      return n;
    }
    auto n = std::make_unique<Node>();
    n->offset = t.offset;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == t.text) {
        n->op = Op::Variable;
        n->variable = static_cast<int>(i);
        return n;
      }
    }
    if (t.text == "pi") {
      n->op = Op::Number;
      n->number = std::numbers::pi;
      return n;
    }
    if (t.text == "e") {
      n->op = Op::Number;
      n->number = std::numbers::e;
      return n;
    }
    throw ParseError("unknown identifier '" + std::string(t.text) + "'", src_, t.offset);
  }

  std::string_view src_;
  const std::vector<std::string>& names_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void print_node(const Node& n, const std::vector<std::string>& names, std::string& out) {
  switch (n.op) {
    case Op::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case Op::Variable:
      out += names[n.variable];
      return;
    case Op::Negate:
      out += "(-";
      print_node(*n.lhs, names, out);
      out += ')';
      return;
    case Op::Call:
      out += function_name(n.function);
      out += '(';
      print_node(*n.lhs, names, out);
      out += ')';
      return;
    default: {
      const char* sym = n.op == Op::Add   ? " + "
                        : n.op == Op::Sub ? " - "
                        : n.op == Op::Mul ? " * "
                        : n.op == Op::Div ? " / "
                                          : "^";
      out += '(';
      print_node(*n.lhs, names, out);
      out += sym;
      print_node(*n.rhs, names, out);
      out += ')';
    }
  }
}

bool is_constant(const Jet2& j) {
  for (int i = 0; i < j.vars(); ++i) {
    if (j.grad(i) != 0.0) return false;
    for (int k = i; k < j.vars(); ++k)
      if (j.hess(i, k) != 0.0) return false;
  }
  return true;
}

Jet2 call(Function f, const Jet2& x) {
  switch (f) {
    case Function::Sin: return sin(x);
    case Function::Cos: return cos(x);
    case Function::Tan: return tan(x);
    case Function::Sinh: return sinh(x);
    case Function::Cosh: return cosh(x);
    case Function::Tanh: return tanh(x);
    case Function::Sech: return sech(x);
    case Function::Csch: return csch(x);
    case Function::Coth: return coth(x);
    case Function::Asin: return asin(x);
    case Function::Acos: return acos(x);
    case Function::Atan: return atan(x);
    case Function::Asinh: return asinh(x);
    case Function::Exp: return exp(x);
    case Function::Log: return log(x);
    case Function::Sqrt: return sqrt(x);
    case Function::Abs: return abs(x);
  }
  return x;
}

struct Evaluator {
  const std::string& source;
  std::span<const Jet2> bindings;

  [[noreturn]] void fail(const Node& n, const std::string& what) const {
    throw DomainError(what + " (at offset " + std::to_string(n.offset) + " of '" + source + "')");
  }

  Jet2 operator()(const Node& n) const {
    try {
      return eval(n);
    } catch (const DomainError& e) {
      // Only the innermost failing node annotates the message.
      if (std::string_view(e.what()).find("(at offset") != std::string_view::npos) throw;
      fail(n, e.what());
    }
  }

  Jet2 eval(const Node& n) const {
    switch (n.op) {
      case Op::Number: return Jet2(n.number);
      case Op::Variable: return bindings[n.variable];
      case Op::Negate: return -(*this)(*n.lhs);
      case Op::Add: return (*this)(*n.lhs) + (*this)(*n.rhs);
      case Op::Sub: return (*this)(*n.lhs) - (*this)(*n.rhs);
      case Op::Mul: return (*this)(*n.lhs) * (*this)(*n.rhs);
      case Op::Div: return (*this)(*n.lhs) / (*this)(*n.rhs);
      case Op::Pow: {
        const Jet2 base = (*this)(*n.lhs);
        const Jet2 ex = (*this)(*n.rhs);
        if (is_constant(ex)) return pow(base, ex.value());
        return pow(base, ex);
      }
      case Op::Call: return call(n.function, (*this)(*n.lhs));
    }
    return {};
  }
};

bool refs(const Node& n, int v) {
  if (n.op == Op::Variable) return n.variable == v;
  return (n.lhs && refs(*n.lhs, v)) || (n.rhs && refs(*n.rhs, v));
}

}  // namespace

ParseError::ParseError(const std::string& message, std::string_view source, std::size_t offset)
    : ValidationError(message + " at offset " + std::to_string(offset) + "\n" +
                      excerpt_for(source, offset)),
      offset_(offset),
      excerpt_(excerpt_for(source, offset)) {}

std::string_view function_name(Function f) {
  for (const auto& [n, fn] : kFunctions)
    if (fn == f) return n;
  return "?";
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Number: return a.number == b.number;
    case Op::Variable: return a.variable == b.variable;
    case Op::Call:
      return a.function == b.function && structurally_equal(*a.lhs, *b.lhs);
    case Op::Negate: return structurally_equal(*a.lhs, *b.lhs);
    default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

Expr parse(std::string_view source, std::vector<std::string> names) {
  for (const auto& n : names) {
    if (lookup_function(n) || n == "pi" || n == "e")
      throw ValidationError("name '" + n + "' is reserved");
  }
  Parser p(source, names);
  Expr e;
  e.root_ = p.run();
  e.names_ = std::move(names);
  e.source_ = std::string(source);
  return e;
}

std::string Expr::print() const {
  std::string out;
  print_node(*root_, names_, out);
  return out;
}

Jet2 Expr::eval(std::span<const Jet2> bindings) const {
  if (bindings.size() != names_.size())
    throw ValidationError("expression '" + source_ + "' expects " +
                          std::to_string(names_.size()) + " bindings");
  Evaluator ev{source_, bindings};
  Jet2 r = ev(*root_);
  if (!r.finite()) throw DomainError("non-finite result evaluating '" + source_ + "'");
  return r;
}

double Expr::eval_value(std::span<const double> values) const {
  std::vector<Jet2> b;
  b.reserve(values.size());
  for (double v : values) b.emplace_back(v);
  return eval(b).value();
}

bool Expr::references(int variable) const { return refs(*root_, variable); }

ScalarField to_field(const Expr& e) {
  ScalarField f;
  f.arity = static_cast<int>(e.names().size());
  f.eval = [e](std::span<const Jet2> in) { return e.eval(in); };
  return f;
}

ScalarField to_field(const Expr& e, const std::vector<std::string>& inputs,
                     const std::map<std::string, double>& constants) {
  const auto& names = e.names();
  std::vector<int> slot(names.size(), -1);
  std::vector<double> fixed(names.size(), 0.0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = std::find(inputs.begin(), inputs.end(), names[i]);
    if (it != inputs.end()) {
      slot[i] = static_cast<int>(it - inputs.begin());
    } else if (auto c = constants.find(names[i]); c != constants.end()) {
      fixed[i] = c->second;
    } else {
      throw ValidationError("name '" + names[i] + "' is neither an input nor a constant");
    }
  }
  ScalarField f;
  f.arity = static_cast<int>(inputs.size());
  f.eval = [e, slot, fixed](std::span<const Jet2> in) {
    std::vector<Jet2> b(slot.size());
    for (std::size_t i = 0; i < slot.size(); ++i) b[i] = slot[i] >= 0 ? in[slot[i]] : Jet2(fixed[i]);
    return e.eval(b);
  };
  return f;
}

ScalarField compile(std::string_view source, const std::vector<std::string>& inputs,
                    const std::map<std::string, double>& constants) {
  std::vector<std::string> names = inputs;
  for (const auto& [k, v] : constants)
    if (std::find(inputs.begin(), inputs.end(), k) == inputs.end()) names.push_back(k);
  return to_field(parse(source, names), inputs, constants);
}

}  // namespace pasurf::expr
