#pragma once

// Tiny total expression language over one variable x:
//   number | x | a+b | a-b | a*b | a/b | a^int | -a | fn(a)
// with fn in {sin, cos, exp, sqrt, abs, atan, log1p}. Parsed ASTs are
// immutable; differentiation is symbolic with constant folding.

#include <memory>
#include <string>
#include <string_view>

#include "wpa/errors.hpp"
#include "wpa/num.hpp"
#include "wpa/smoothfn.hpp"

namespace wpa {

enum class ExprKind { number, var, add, sub, mul, div, pow, neg, call };
enum class ExprFn { sin, cos, exp, sqrt, abs, atan, log1p };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  double value = 0;  // number
  int exponent = 0;  // pow
  ExprFn fn = ExprFn::sin;
  ExprPtr a, b;
};

ExprPtr expr_number(double v);
ExprPtr expr_var();

// Throws SyntaxError (with byte offset) or UnknownFunction.
ExprPtr parse_expr(std::string_view src);

// order-fold symbolic derivative; throws NonDifferentiable if abs occurs and
// order >= 1.
ExprPtr differentiate(const ExprPtr& e, int order = 1);

std::string to_string(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool expr_contains_abs(const ExprPtr& e);

template <class R>
R eval_expr(const ExprPtr& e, R x) {
  switch (e->kind) {
    case ExprKind::number: return R(e->value);
    case ExprKind::var: return x;
    case ExprKind::add: return eval_expr(e->a, x) + eval_expr(e->b, x);
    case ExprKind::sub: return eval_expr(e->a, x) - eval_expr(e->b, x);
    case ExprKind::mul: return eval_expr(e->a, x) * eval_expr(e->b, x);
    case ExprKind::div: {
      R den = eval_expr(e->b, x);
      if (den == R(0)) throw Error("cli", errc::domain_error, "division by zero");
      return eval_expr(e->a, x) / den;
    }
    case ExprKind::pow: {
      R base = eval_expr(e->a, x);
      int n = e->exponent;
      bool inv = n < 0;
      unsigned k = inv ? unsigned(-(long long)n) : unsigned(n);
      R r = 1, b2 = base;
      while (k) {
        if (k & 1) r *= b2;
        b2 *= b2;
        k >>= 1;
      }
      if (inv) {
        if (r == R(0)) throw Error("cli", errc::domain_error, "zero to a negative power");
        return R(1) / r;
      }
      return r;
    }
    case ExprKind::neg: return -eval_expr(e->a, x);
    case ExprKind::call: {
      R u = eval_expr(e->a, x);
      switch (e->fn) {
        case ExprFn::sin: return num::sin(u);
        case ExprFn::cos: return num::cos(u);
        case ExprFn::exp: return num::exp(u);
        case ExprFn::sqrt:
          if (u < R(0)) throw Error("cli", errc::domain_error, "sqrt of a negative value");
          return num::sqrt(u);
        case ExprFn::abs: return num::fabs(u);
        case ExprFn::atan: return num::atan(u);
        case ExprFn::log1p:
          if (u <= R(-1)) throw Error("cli", errc::domain_error, "log1p at or below -1");
          return num::log1p(u);
      }
      break;
    }
  }
  throw Error("cli", errc::bad_config, "corrupt expression node");
}

// Evaluate with a finiteness check at the root.
template <class R>
R eval_expr_checked(const ExprPtr& e, R x) {
  R v = eval_expr(e, x);
  if (!num::isfinite(v)) throw Error("cli", errc::domain_error, "expression not finite here");
  return v;
}

// f together with its first max_order symbolic derivatives.
template <class R>
SmoothFn<R> make_smooth_fn(const ExprPtr& e, int max_order) {
  SmoothFn<R> f;
  ExprPtr cur = e;
  for (int k = 0; k <= max_order; ++k) {
    f.d.push_back([cur](R x) { return eval_expr(cur, x); });
    if (k < max_order) cur = differentiate(cur, 1);
  }
  return f;
}

}  // namespace wpa
