#include "hermite/runner/symbol_parser.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numbers>

namespace hermite::runner {

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Op { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sqrt, Exp } op;
  double number = 0.0;
  int variable = 0;
  NodePtr a, b;

  cplx eval(std::span<const cplx> z) const {
    switch (op) {
      case Op::Number: return number;
      case Op::Variable: return z[static_cast<std::size_t>(variable)];
      case Op::Add: return a->eval(z) + b->eval(z);
      case Op::Sub: return a->eval(z) - b->eval(z);
      case Op::Mul: return a->eval(z) * b->eval(z);
      case Op::Div: return a->eval(z) / b->eval(z);
      case Op::Pow: {
        const cplx base = a->eval(z);
        const cplx exponent = b->eval(z);
        if (exponent.imag() == 0.0 && exponent.real() == std::round(exponent.real()) && std::abs(exponent.real()) <= 64)
          return std::pow(base, static_cast<int>(exponent.real()));
        return std::pow(base, exponent);
      }
      case Op::Neg: return -a->eval(z);
      case Op::Sqrt: return std::sqrt(a->eval(z));
      case Op::Exp: return std::exp(a->eval(z));
    }
    return 0.0;
  }
};

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(const std::string& text, int dim) : s_(text), dim_(dim) {}

  NodePtr parse() {
    skip();
    if (pos_ == s_.size()) throw SymbolSyntaxError("empty expression", pos_);
    NodePtr n = expression();
    skip();
    if (pos_ != s_.size()) throw SymbolSyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return n;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw SymbolSyntaxError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expression() {
    NodePtr n = term();
    while (true) {
      if (accept('+'))
        n = make(Node::Op::Add, n, term());
      else if (accept('-'))
        n = make(Node::Op::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    while (true) {
      if (accept('*'))
        n = make(Node::Op::Mul, n, unary());
      else if (accept('/'))
        n = make(Node::Op::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  // Right associative: a^b^c = a^(b^c); the exponent may carry a sign.
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ == s_.size()) throw SymbolSyntaxError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expression();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto r = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
      if (r.ec != std::errc()) throw SymbolSyntaxError("malformed number", pos_);
      pos_ = static_cast<std::size_t>(r.ptr - s_.data());
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Number;
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "sqrt" || name == "exp") {
        expect('(');
        NodePtr arg = expression();
        expect(')');
        return make(name == "sqrt" ? Node::Op::Sqrt : Node::Op::Exp, arg);
      }
      if (name.size() >= 2 && name[0] == 'z' && name.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int index = std::stoi(name.substr(1));
        if (index < 1 || index > dim_)
          throw SymbolSyntaxError("variable " + name + " outside z1..z" + std::to_string(dim_), start);
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Variable;
        n->variable = index - 1;
        return n;
      }
      throw SymbolSyntaxError("unknown name '" + name + "'", start);
    }
    throw SymbolSyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  const std::string& s_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedSymbol parse_symbol(const std::string& expr, int dim, int bound_cap, std::optional<double> sector) {
  if (dim < 1 || dim > kMaxDim) throw ValidationError("parse_symbol: dimension must be in 1..3");
  if (bound_cap < 0) throw ValidationError("parse_symbol: negative bound cap");
  const NodePtr root = Parser(expr, dim).parse();
  MultiplierSymbol m(expr, dim, [root](std::span<const cplx> z) { return root->eval(z); });
  if (sector) m.with_sector(*sector);
  ParsedSymbol out{m, m.lattice_bound(bound_cap), bound_cap};
  // Real on the positive axis if every sample off and on the lattice is real.
  bool real = true;
  std::array<cplx, kMaxDim> z{};
  for (int i = 0; i <= 40 && real; ++i) {
    const double x = std::pow(10.0, -2.0 + 0.125 * i);
    for (int j = 0; j < dim; ++j) z[static_cast<std::size_t>(j)] = x * (1.0 + 0.37 * j);
    const cplx v = m.evaluate(std::span<const cplx>(z.data(), static_cast<std::size_t>(dim)));
    real = std::abs(v.imag()) <= 1e-13 * std::max(1.0, std::abs(v));
  }
  out.symbol.with_real_on_axis(real);
  return out;
}

}  // namespace hermite::runner
