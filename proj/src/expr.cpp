#include "etl/expr.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace etl {
namespace detail {

enum class NodeKind { number, variable, const_pi, const_e, negate, call, binary };
enum class BinOp { add, sub, mul, div, pow };
enum class Func {
  sin_f, cos_f, tan_f, sinh_f, cosh_f, tanh_f, sech_f, csch_f, coth_f,
  exp_f, log_f, sqrt_f, arctan_f, abs_f
};

struct Node {
  NodeKind kind;
  double number = 0.0;
  BinOp op = BinOp::add;
  Func func = Func::sin_f;
  std::shared_ptr<const Node> a, b;
};

namespace {

struct FuncName {
  const char* name;
  Func id;
};

constexpr std::array<FuncName, 14> kFuncs = {{
    {"sin", Func::sin_f}, {"cos", Func::cos_f}, {"tan", Func::tan_f},
    {"sinh", Func::sinh_f}, {"cosh", Func::cosh_f}, {"tanh", Func::tanh_f},
    {"sech", Func::sech_f}, {"csch", Func::csch_f}, {"coth", Func::coth_f},
    {"exp", Func::exp_f}, {"log", Func::log_f}, {"sqrt", Func::sqrt_f},
    {"arctan", Func::arctan_f}, {"abs", Func::abs_f},
}};

const char* func_name(Func f) {
  for (const auto& e : kFuncs) {
    if (e.id == f) return e.name;
  }
  return "?";
}

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::number;
  n->number = v;
  return n;
}

NodePtr make_leaf(NodeKind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

NodePtr make_negate(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::negate;
  n->a = std::move(a);
  return n;
}

NodePtr make_call(Func f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->func = f;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(BinOp op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::binary;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, std::string_view var) : text_(text), var_(var) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(std::string("expected ") + what, pos_);
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinOp::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_binary(BinOp::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinOp::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(BinOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_negate(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (accept('^')) {
      // Right associative; the exponent may itself be signed: s^-2.
      return make_binary(BinOp::pow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    // The token set guarantees a number never starts with '-', so strtod's
    // extras (inf/nan/hex) cannot be reached from parse_atom.
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return make_number(v);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view word = text_.substr(start, pos_ - start);
    if (peek('(')) {
      for (const auto& f : kFuncs) {
        if (word == f.name) {
          ++pos_;  // consume '('
          NodePtr arg = parse_expr();
          expect(')', "')' after function argument");
          return make_call(f.id, arg);
        }
      }
      throw ParseError("unknown function '" + std::string(word) + "'", start);
    }
    if (word == "pi") return make_leaf(NodeKind::const_pi);
    if (word == "e") return make_leaf(NodeKind::const_e);
    if (word == var_) return make_leaf(NodeKind::variable);
    if (word == "t" || word == "s" || word == "x" || word == "w") {
      throw ParseError("wrong variable '" + std::string(word) + "', expected '" +
                           std::string(var_) + "'",
                       start);
    }
    throw ParseError("unknown identifier '" + std::string(word) + "'", start);
  }

  std::string_view text_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

Jet2 eval_node(const Node& n, const Jet2& x) {
  switch (n.kind) {
    case NodeKind::number: return Jet2::constant(n.number);
    case NodeKind::variable: return x;
    case NodeKind::const_pi: return Jet2::constant(std::numbers::pi);
    case NodeKind::const_e: return Jet2::constant(std::numbers::e);
    case NodeKind::negate: return -eval_node(*n.a, x);
    case NodeKind::call: {
      const Jet2 a = eval_node(*n.a, x);
      switch (n.func) {
        case Func::sin_f: return sin(a);
        case Func::cos_f: return cos(a);
        case Func::tan_f: return tan(a);
        case Func::sinh_f: return sinh(a);
        case Func::cosh_f: return cosh(a);
        case Func::tanh_f: return tanh(a);
        case Func::sech_f: return sech(a);
        case Func::csch_f: return csch(a);
        case Func::coth_f: return coth(a);
        case Func::exp_f: return exp(a);
        case Func::log_f: return log(a);
        case Func::sqrt_f: return sqrt(a);
        case Func::arctan_f: return arctan(a);
        case Func::abs_f: return abs(a);
      }
      break;
    }
    case NodeKind::binary: {
      const Jet2 a = eval_node(*n.a, x);
      const Jet2 b = eval_node(*n.b, x);
      switch (n.op) {
        case BinOp::add: return a + b;
        case BinOp::sub: return a - b;
        case BinOp::mul: return a * b;
        case BinOp::div: return a / b;
        case BinOp::pow: return pow(a, b);
      }
      break;
    }
  }
  throw DomainError("corrupt expression tree");
}

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::binary:
      switch (n.op) {
        case BinOp::add:
        case BinOp::sub: return 1;
        case BinOp::mul:
        case BinOp::div: return 2;
        case BinOp::pow: return 4;
      }
      return 1;
    case NodeKind::negate: return 3;
    default: return 5;
  }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::number: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n.number);
      out += buf;
      return;
    }
    case NodeKind::variable: out += "@"; return;  // replaced by Expression::print
    case NodeKind::const_pi: out += "pi"; return;
    case NodeKind::const_e: out += "e"; return;
    case NodeKind::negate:
      out += '-';
      print_child(*n.a, 3, out);
      return;
    case NodeKind::call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      return;
    case NodeKind::binary: {
      // Right operands are always parenthesized at equal precedence so the
      // printed form reparses to the identical tree (a+(b+c) stays
      // right-nested); pow is right associative, so the rule flips there.
      const char* sym = "+";
      int prec = precedence(n);
      int lhs_min = prec;
      int rhs_min = prec + 1;
      switch (n.op) {
        case BinOp::add: sym = "+"; break;
        case BinOp::sub: sym = "-"; break;
        case BinOp::mul: sym = "*"; break;
        case BinOp::div: sym = "/"; break;
        case BinOp::pow:
          sym = "^";
          lhs_min = prec + 1;
          rhs_min = prec;
          break;
      }
      print_child(*n.a, lhs_min, out);
      out += sym;
      print_child(*n.b, rhs_min, out);
      return;
    }
  }
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::number: return a.number == b.number;
    case NodeKind::variable:
    case NodeKind::const_pi:
    case NodeKind::const_e: return true;
    case NodeKind::negate: return equal_nodes(*a.a, *b.a);
    case NodeKind::call: return a.func == b.func && equal_nodes(*a.a, *b.a);
    case NodeKind::binary:
      return a.op == b.op && equal_nodes(*a.a, *b.a) && equal_nodes(*a.b, *b.b);
  }
  return false;
}

bool references_variable(const Node& n) {
  switch (n.kind) {
    case NodeKind::variable: return true;
    case NodeKind::negate:
    case NodeKind::call: return references_variable(*n.a);
    case NodeKind::binary:
      return references_variable(*n.a) || references_variable(*n.b);
    default: return false;
  }
}

}  // namespace
}  // namespace detail

Expression Expression::parse(std::string_view text, std::string_view var_name) {
  if (text.empty()) throw ParseError("empty expression", 0);
  detail::Parser parser(text, var_name);
  Expression e;
  e.root_ = parser.run();
  e.var_ = std::string(var_name);
  return e;
}

Jet2 Expression::eval_jet2(double x) const {
  return detail::eval_node(*root_, Jet2::variable(x));
}

double Expression::eval(double x) const { return eval_jet2(x).v; }

std::string Expression::print() const {
  std::string raw;
  detail::print_node(*root_, raw);
  // The tree printer emits '@' for the free variable; substitute its name.
  std::string out;
  out.reserve(raw.size() + 8);
  for (char c : raw) {
    if (c == '@') {
      out += var_;
    } else {
      out += c;
    }
  }
  return out;
}

bool Expression::structurally_equal(const Expression& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return detail::equal_nodes(*root_, *other.root_);
}

bool Expression::is_constant() const {
  return root_ && !detail::references_variable(*root_);
}

}  // namespace etl
