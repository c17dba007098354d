#include "wpa/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace wpa {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr num_node(double v) {
  Expr e;
  e.kind = ExprKind::number;
  e.value = v;
  return node(std::move(e));
}

ExprPtr bin(ExprKind k, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = k;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}

ExprPtr un(ExprKind k, ExprPtr a) {
  Expr e;
  e.kind = k;
  e.a = std::move(a);
  return node(std::move(e));
}

ExprPtr call(ExprFn fn, ExprPtr a) {
  Expr e;
  e.kind = ExprKind::call;
  e.fn = fn;
  e.a = std::move(a);
  return node(std::move(e));
}

ExprPtr pow_node(ExprPtr a, int k) {
  Expr e;
  e.kind = ExprKind::pow;
  e.exponent = k;
  e.a = std::move(a);
  return node(std::move(e));
}

bool is_num(const ExprPtr& e, double v) { return e->kind == ExprKind::number && e->value == v; }

// ---- constant folding ----

ExprPtr fold(ExprPtr e) {
  switch (e->kind) {
    case ExprKind::number:
    case ExprKind::var: return e;
    case ExprKind::neg: {
      ExprPtr a = fold(e->a);
      if (a->kind == ExprKind::number) return num_node(-a->value);
      if (a->kind == ExprKind::neg) return a->a;
      return un(ExprKind::neg, a);
    }
    case ExprKind::pow: {
      ExprPtr a = fold(e->a);
      if (e->exponent == 0) return num_node(1.0);
      if (e->exponent == 1) return a;
      if (a->kind == ExprKind::number) return num_node(std::pow(a->value, e->exponent));
      return pow_node(a, e->exponent);
    }
    case ExprKind::call: {
      ExprPtr a = fold(e->a);
      return call(e->fn, a);
    }
    default: break;
  }
  ExprPtr a = fold(e->a), b = fold(e->b);
  const bool an = a->kind == ExprKind::number, bn = b->kind == ExprKind::number;
  switch (e->kind) {
    case ExprKind::add:
      if (an && bn) return num_node(a->value + b->value);
      if (is_num(a, 0)) return b;
      if (is_num(b, 0)) return a;
      break;
    case ExprKind::sub:
      if (an && bn) return num_node(a->value - b->value);
      if (is_num(b, 0)) return a;
      if (is_num(a, 0)) return fold(un(ExprKind::neg, b));
      break;
    case ExprKind::mul:
      if (an && bn) return num_node(a->value * b->value);
      if (is_num(a, 0) || is_num(b, 0)) return num_node(0.0);
      if (is_num(a, 1)) return b;
      if (is_num(b, 1)) return a;
      break;
    case ExprKind::div:
      if (is_num(a, 0)) return num_node(0.0);
      if (is_num(b, 1)) return a;
      if (an && bn && b->value != 0) return num_node(a->value / b->value);
      break;
    default: break;
  }
  return bin(e->kind, a, b);
}

// ---- parser ----

struct Parser {
  std::string_view src;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw Error("cli", errc::syntax_error, what + " at offset " + std::to_string(pos),
                long(pos));
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos != src.size()) fail("unexpected trailing input");
    return e;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (eat('+')) lhs = bin(ExprKind::add, lhs, parse_term());
      else if (eat('-')) lhs = bin(ExprKind::sub, lhs, parse_term());
      else return lhs;
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      if (eat('*')) lhs = bin(ExprKind::mul, lhs, parse_unary());
      else if (eat('/')) lhs = bin(ExprKind::div, lhs, parse_unary());
      else return lhs;
    }
  }

  ExprPtr parse_unary() {
    if (eat('-')) return un(ExprKind::neg, parse_unary());
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (eat('^')) e = pow_node(e, parse_int());
    return e;
  }

  int parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) ++pos;
    size_t digits = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == digits) fail("expected integer exponent");
    int v = 0;
    auto [p, ec] = std::from_chars(src.data() + start, src.data() + pos, v);
    if (ec != std::errc()) fail("bad integer exponent");
    return v;
  }

  ExprPtr parse_primary() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of input");
    char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0;
      auto [p, ec] = std::from_chars(src.data() + pos, src.data() + src.size(), v);
      if (ec != std::errc()) fail("bad number literal");
      pos = size_t(p - src.data());
      return num_node(v);
    }
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_sum();
      skip_ws();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
        ++pos;
      std::string name(src.substr(start, pos - start));
      if (name == "x" && peek() != '(') return expr_var();
      static const std::map<std::string, ExprFn> fns = {
          {"sin", ExprFn::sin},   {"cos", ExprFn::cos},     {"exp", ExprFn::exp},
          {"sqrt", ExprFn::sqrt}, {"abs", ExprFn::abs},     {"atan", ExprFn::atan},
          {"log1p", ExprFn::log1p}};
      auto it = fns.find(name);
      if (it == fns.end()) {
        pos = start;
        throw Error("cli", errc::unknown_function, "unknown function '" + name + "'", long(start));
      }
      if (!eat('(')) fail("expected '(' after function name");
      ExprPtr arg = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return call(it->second, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

ExprPtr d1(const ExprPtr& e);

ExprPtr chain(const ExprPtr& outer_deriv, const ExprPtr& u) {
  return bin(ExprKind::mul, outer_deriv, d1(u));
}

ExprPtr d1(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::number: return num_node(0.0);
    case ExprKind::var: return num_node(1.0);
    case ExprKind::add: return bin(ExprKind::add, d1(e->a), d1(e->b));
    case ExprKind::sub: return bin(ExprKind::sub, d1(e->a), d1(e->b));
    case ExprKind::mul:
      return bin(ExprKind::add, bin(ExprKind::mul, d1(e->a), e->b),
                 bin(ExprKind::mul, e->a, d1(e->b)));
    case ExprKind::div:
      return bin(ExprKind::div,
                 bin(ExprKind::sub, bin(ExprKind::mul, d1(e->a), e->b),
                     bin(ExprKind::mul, e->a, d1(e->b))),
                 pow_node(e->b, 2));
    case ExprKind::pow:
      if (e->exponent == 0) return num_node(0.0);
      return bin(ExprKind::mul, num_node(double(e->exponent)),
                 bin(ExprKind::mul, pow_node(e->a, e->exponent - 1), d1(e->a)));
    case ExprKind::neg: return un(ExprKind::neg, d1(e->a));
    case ExprKind::call:
      switch (e->fn) {
        case ExprFn::sin: return chain(call(ExprFn::cos, e->a), e->a);
        case ExprFn::cos: return chain(un(ExprKind::neg, call(ExprFn::sin, e->a)), e->a);
        case ExprFn::exp: return chain(call(ExprFn::exp, e->a), e->a);
        case ExprFn::sqrt:
          return bin(ExprKind::div, d1(e->a),
                     bin(ExprKind::mul, num_node(2.0), call(ExprFn::sqrt, e->a)));
        case ExprFn::abs:
          throw Error("cli", errc::non_differentiable, "abs is not differentiable");
        case ExprFn::atan:
          return bin(ExprKind::div, d1(e->a),
                     bin(ExprKind::add, num_node(1.0), pow_node(e->a, 2)));
        case ExprFn::log1p:
          return bin(ExprKind::div, d1(e->a), bin(ExprKind::add, num_node(1.0), e->a));
      }
  }
  throw Error("cli", errc::bad_config, "corrupt expression node");
}

}  // namespace

ExprPtr expr_number(double v) { return num_node(v); }

ExprPtr expr_var() {
  Expr e;
  e.kind = ExprKind::var;
  return node(std::move(e));
}

ExprPtr parse_expr(std::string_view src) {
  if (src.empty()) throw Error("cli", errc::syntax_error, "empty expression", 0);
  Parser p{src};
  return fold(p.parse());
}

bool expr_contains_abs(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::call && e->fn == ExprFn::abs) return true;
  return expr_contains_abs(e->a) || expr_contains_abs(e->b);
}

ExprPtr differentiate(const ExprPtr& e, int order) {
  if (order < 0) throw Error("cli", errc::bad_config, "negative derivative order");
  ExprPtr cur = e;
  for (int k = 0; k < order; ++k) {
    if (expr_contains_abs(cur))
      throw Error("cli", errc::non_differentiable, "abs is not differentiable");
    cur = fold(d1(cur));
  }
  return cur;
}

namespace {

const char* fn_name(ExprFn f) {
  switch (f) {
    case ExprFn::sin: return "sin";
    case ExprFn::cos: return "cos";
    case ExprFn::exp: return "exp";
    case ExprFn::sqrt: return "sqrt";
    case ExprFn::abs: return "abs";
    case ExprFn::atan: return "atan";
    case ExprFn::log1p: return "log1p";
  }
  return "?";
}

void print(const ExprPtr& e, std::string& out) {
  char buf[40];
  switch (e->kind) {
    case ExprKind::number:
      std::snprintf(buf, sizeof buf, "%.17g", e->value);
      out += buf;
      return;
    case ExprKind::var: out += 'x'; return;
    case ExprKind::add:
    case ExprKind::sub:
    case ExprKind::mul:
    case ExprKind::div: {
      out += '(';
      print(e->a, out);
      out += e->kind == ExprKind::add   ? '+'
             : e->kind == ExprKind::sub ? '-'
             : e->kind == ExprKind::mul ? '*'
                                        : '/';
      print(e->b, out);
      out += ')';
      return;
    }
    case ExprKind::pow: {
      if (e->a->kind == ExprKind::number || e->a->kind == ExprKind::var ||
          e->a->kind == ExprKind::call) {
        print(e->a, out);
      } else {
        out += '(';
        print(e->a, out);
        out += ')';
      }
      out += '^';
      std::snprintf(buf, sizeof buf, "%d", e->exponent);
      out += buf;
      return;
    }
    case ExprKind::neg:
      out += "(-";
      print(e->a, out);
      out += ')';
      return;
    case ExprKind::call:
      out += fn_name(e->fn);
      out += '(';
      print(e->a, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::string s;
  print(e, s);
  return s;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::number: return a->value == b->value;
    case ExprKind::var: return true;
    case ExprKind::pow: return a->exponent == b->exponent && expr_equal(a->a, b->a);
    case ExprKind::neg: return expr_equal(a->a, b->a);
    case ExprKind::call: return a->fn == b->fn && expr_equal(a->a, b->a);
    default: return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

}  // namespace wpa
