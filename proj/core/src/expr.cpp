#include "compmap/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "compmap/errors.hpp"
#include "compmap/geometry.hpp"

namespace compmap::expr {

namespace {

constexpr double kSingularTol = 1e-12;

double checked_div(double n, double d) {
  if (std::abs(d) < kSingularTol) throw SingularityError("division by a value below 1e-12 in magnitude");
  return n / d;
}

double checked_pow(double base, double exponent) {
  if (exponent < 0 && std::abs(base) < kSingularTol) {
    throw SingularityError("negative power of a value below 1e-12 in magnitude");
  }
  const double r = std::pow(base, exponent);
  if (std::isnan(r)) throw DomainError("non-integer power of a negative number");
  return r;
}

std::shared_ptr<Node> make_node(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

bool is_const(const Expr& e, double v) { return e.kind() == Kind::constant && e.node().value == v; }
bool is_const(const Expr& e) { return e.kind() == Kind::constant; }

// True when evaluation of e cannot throw for any finite x, y.
bool total(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::variable:
      return true;
    case Kind::parameter:
      return false;
    case Kind::negate:
      return total(n.children[0]);
    case Kind::binary:
      if (n.op == BinaryOp::div) return false;
      if (n.op == BinaryOp::pow) {
        const double p = n.children[1].node().value;
        if (p < 0 || p != std::floor(p)) return false;
      }
      return total(n.children[0]) && total(n.children[1]);
  }
  return false;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip_ws();
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw ParseError(pos_, std::move(expected), found);
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  static bool number_start(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      Expr rhs = parse_term();
      lhs = Expr::binary(c == '+' ? BinaryOp::add : BinaryOp::sub, std::move(lhs), std::move(rhs));
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      Expr rhs = parse_factor();
      lhs = Expr::binary(c == '*' ? BinaryOp::mul : BinaryOp::div, std::move(lhs), std::move(rhs));
    }
  }

  Expr parse_factor() {
    if (peek() == '-') {
      ++pos_;
      return Expr::negate(parse_factor());
    }
    Expr base = parse_primary();
    if (peek() == '^') {
      ++pos_;
      double sign = 1.0;
      const char s = peek();
      if (s == '-' || s == '+') {
        sign = s == '-' ? -1.0 : 1.0;
        ++pos_;
      }
      if (!number_start(peek())) fail({"number"});
      return Expr::power(std::move(base), sign * parse_number());
    }
    return base;
  }

  Expr parse_primary() {
    const char c = peek();
    if (number_start(c)) return Expr::constant(parse_number());
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "x") return Expr::variable(Var::x);
      if (name == "y") return Expr::variable(Var::y);
      return Expr::parameter(std::move(name));
    }
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (peek() != ')') fail({"')'", "'+'", "'-'", "'*'", "'/'", "'^'"});
      ++pos_;
      return inner;
    }
    fail({"number", "identifier", "'('", "'-'"});
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail({"number"});
    }
    return v;
  }
};

// ---------------------------------------------------------------- printing

int precedence(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
      return std::signbit(n.value) ? 3 : 5;
    case Kind::variable:
    case Kind::parameter:
      return 5;
    case Kind::negate:
      return 3;
    case Kind::binary:
      switch (n.op) {
        case BinaryOp::add:
        case BinaryOp::sub:
          return 1;
        case BinaryOp::mul:
        case BinaryOp::div:
          return 2;
        case BinaryOp::pow:
          return 4;
      }
  }
  return 5;
}

void print(const Expr& e, int min_prec, std::string& out) {
  const bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
      out += format_real(n.value);
      break;
    case Kind::variable:
      out += n.var == Var::x ? 'x' : 'y';
      break;
    case Kind::parameter:
      out += n.name;
      break;
    case Kind::negate:
      out += '-';
      print(n.children[0], 3, out);
      break;
    case Kind::binary: {
      static constexpr std::array<char, 5> sym{'+', '-', '*', '/', '^'};
      const auto op = static_cast<std::size_t>(n.op);
      if (n.op == BinaryOp::pow) {
        print(n.children[0], 5, out);
        out += '^';
        out += format_real(n.children[1].node().value);
      } else {
        const int p = precedence(e);
        print(n.children[0], p, out);
        out += sym[op];
        print(n.children[1], p + 1, out);
      }
      break;
    }
  }
  if (paren) out += ')';
}

void collect_parameters(const Expr& e, std::set<std::string>& out) {
  const Node& n = e.node();
  if (n.kind == Kind::parameter) out.insert(n.name);
  for (const Expr& c : n.children) collect_parameters(c, out);
}

}  // namespace

// ---------------------------------------------------------------- Expr

Expr::Expr() : node_(make_node(Kind::constant)) {}

Kind Expr::kind() const { return node_->kind; }

Expr Expr::constant(double v) {
  auto n = make_node(Kind::constant);
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = make_node(Kind::variable);
  n->var = v;
  return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
  auto n = make_node(Kind::parameter);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr child) {
  auto n = make_node(Kind::negate);
  n->children.push_back(std::move(child));
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  if (op == BinaryOp::pow && rhs.kind() != Kind::constant) {
    throw PreconditionError("exponent of '^' must be a constant");
  }
  auto n = make_node(Kind::binary);
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, double exponent) {
  return binary(BinaryOp::pow, std::move(base), constant(exponent));
}

// ---------------------------------------------------------------- operations

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

double eval(const Expr& e, double x, double y, const Params& params) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::variable:
      return n.var == Var::x ? x : y;
    case Kind::parameter: {
      auto it = params.find(n.name);
      if (it == params.end()) throw UnboundParameterError(n.name);
      return it->second;
    }
    case Kind::negate:
      return -eval(n.children[0], x, y, params);
    case Kind::binary: {
      const double a = eval(n.children[0], x, y, params);
      const double b = eval(n.children[1], x, y, params);
      switch (n.op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div: return checked_div(a, b);
        case BinaryOp::pow: return checked_pow(a, b);
      }
    }
  }
  return 0.0;
}

Expr fold(const Expr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::variable:
    case Kind::parameter:
      return e;
    case Kind::negate: {
      Expr c = fold(n.children[0]);
      if (is_const(c)) return Expr::constant(-c.node().value);
      if (c.kind() == Kind::negate) return c.node().children[0];
      return Expr::negate(std::move(c));
    }
    case Kind::binary:
      break;
  }

  Expr a = fold(n.children[0]);
  Expr b = fold(n.children[1]);
  if (is_const(a) && is_const(b)) {
    const double av = a.node().value;
    const double bv = b.node().value;
    switch (n.op) {
      case BinaryOp::add: return Expr::constant(av + bv);
      case BinaryOp::sub: return Expr::constant(av - bv);
      case BinaryOp::mul: return Expr::constant(av * bv);
      case BinaryOp::div:
        if (std::abs(bv) >= kSingularTol) return Expr::constant(av / bv);
        break;
      case BinaryOp::pow:
        if (!(bv < 0 && std::abs(av) < kSingularTol)) {
          const double r = std::pow(av, bv);
          if (!std::isnan(r)) return Expr::constant(r);
        }
        break;
    }
    return Expr::binary(n.op, std::move(a), std::move(b));
  }

  switch (n.op) {
    case BinaryOp::add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case BinaryOp::sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return fold(Expr::negate(b));
      break;
    case BinaryOp::mul:
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      if (is_const(a, 0.0) && total(b)) return Expr::constant(0.0);
      if (is_const(b, 0.0) && total(a)) return Expr::constant(0.0);
      if (is_const(a, -1.0)) return fold(Expr::negate(b));
      if (is_const(b, -1.0)) return fold(Expr::negate(a));
      break;
    case BinaryOp::div:
      if (is_const(b, 1.0)) return a;
      break;
    case BinaryOp::pow: {
      const double p = b.node().value;
      if (p == 1.0) return a;
      if (p == 0.0 && total(a)) return Expr::constant(1.0);
      break;
    }
  }
  return Expr::binary(n.op, std::move(a), std::move(b));
}

Expr differentiate(const Expr& e, Var v) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::parameter:
      return Expr::constant(0.0);
    case Kind::variable:
      return Expr::constant(n.var == v ? 1.0 : 0.0);
    case Kind::negate:
      return fold(Expr::negate(differentiate(n.children[0], v)));
    case Kind::binary:
      break;
  }
  const Expr& u = n.children[0];
  const Expr& w = n.children[1];
  switch (n.op) {
    case BinaryOp::add:
      return fold(differentiate(u, v) + differentiate(w, v));
    case BinaryOp::sub:
      return fold(differentiate(u, v) - differentiate(w, v));
    case BinaryOp::mul:
      return fold(differentiate(u, v) * w + u * differentiate(w, v));
    case BinaryOp::div:
      return fold((differentiate(u, v) * w - u * differentiate(w, v)) / Expr::power(w, 2.0));
    case BinaryOp::pow: {
      const double p = w.node().value;
      return fold(Expr::constant(p) * Expr::power(u, p - 1.0) * differentiate(u, v));
    }
  }
  return Expr::constant(0.0);
}

Expr bind(const Expr& e, const Params& params) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
    case Kind::variable:
      return e;
    case Kind::parameter: {
      auto it = params.find(n.name);
      return it == params.end() ? e : Expr::constant(it->second);
    }
    case Kind::negate:
      return fold(Expr::negate(bind(n.children[0], params)));
    case Kind::binary:
      return fold(Expr::binary(n.op, bind(n.children[0], params), bind(n.children[1], params)));
  }
  return e;
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

std::set<std::string> parameters(const Expr& e) {
  std::set<std::string> out;
  collect_parameters(e, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::constant:
      return x.value == y.value;
    case Kind::variable:
      return x.var == y.var;
    case Kind::parameter:
      return x.name == y.name;
    case Kind::negate:
      return structurally_equal(x.children[0], y.children[0]);
    case Kind::binary:
      return x.op == y.op && structurally_equal(x.children[0], y.children[0]) &&
             structurally_equal(x.children[1], y.children[1]);
  }
  return false;
}

// ---------------------------------------------------------------- Compiled

Compiled::Compiled(const Expr& e) {
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const Expr& ex) -> void {
    const Node& n = ex.node();
    switch (n.kind) {
      case Kind::constant:
        code_.push_back({Op::push_const, n.value});
        max_depth_ = std::max(max_depth_, ++depth);
        return;
      case Kind::variable:
        code_.push_back({n.var == Var::x ? Op::push_x : Op::push_y, 0.0});
        max_depth_ = std::max(max_depth_, ++depth);
        return;
      case Kind::parameter:
        throw UnboundParameterError(n.name);
      case Kind::negate:
        self(self, n.children[0]);
        code_.push_back({Op::neg, 0.0});
        return;
      case Kind::binary:
        if (n.op == BinaryOp::pow) {
          self(self, n.children[0]);
          const double p = n.children[1].node().value;
          code_.push_back({p == 2.0 ? Op::square : Op::pow, p});
          return;
        }
        self(self, n.children[0]);
        self(self, n.children[1]);
        --depth;
        switch (n.op) {
          case BinaryOp::add: code_.push_back({Op::add, 0.0}); break;
          case BinaryOp::sub: code_.push_back({Op::sub, 0.0}); break;
          case BinaryOp::mul: code_.push_back({Op::mul, 0.0}); break;
          case BinaryOp::div: code_.push_back({Op::div, 0.0}); break;
          case BinaryOp::pow: break;
        }
        return;
    }
  };
  emit(emit, e);
}

double Compiled::operator()(double x, double y) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::push_const: stack[sp++] = in.value; break;
      case Op::push_x: stack[sp++] = x; break;
      case Op::push_y: stack[sp++] = y; break;
      case Op::neg: stack[sp - 1] = -stack[sp - 1]; break;
      case Op::add: --sp; stack[sp - 1] += stack[sp]; break;
      case Op::sub: --sp; stack[sp - 1] -= stack[sp]; break;
      case Op::mul: --sp; stack[sp - 1] *= stack[sp]; break;
      case Op::div: --sp; stack[sp - 1] = checked_div(stack[sp - 1], stack[sp]); break;
      case Op::square: stack[sp - 1] *= stack[sp - 1]; break;
      case Op::pow: stack[sp - 1] = checked_pow(stack[sp - 1], in.value); break;
    }
  }
  return stack[0];
}

}  // namespace compmap::expr
