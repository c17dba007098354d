#include <doctest.h>

#include <cmath>

#include <random>

#include "oracles.hpp"
#include "wpa/expr.hpp"

using namespace wpa;

TEST_SUITE("expr") {
  TEST_CASE("grammar shapes") {
    auto e = parse_expr("sin(x)+x^3");
    REQUIRE(e->kind == ExprKind::add);
    CHECK(e->a->kind == ExprKind::call);
    CHECK(e->a->fn == ExprFn::sin);
    CHECK(e->b->kind == ExprKind::pow);
    CHECK(e->b->exponent == 3);
    CHECK(e->b->a->kind == ExprKind::var);

    // precedence: ^ binds tighter than unary minus, * tighter than +
    auto neg = parse_expr("-x^2");
    REQUIRE(neg->kind == ExprKind::neg);
    CHECK(neg->a->kind == ExprKind::pow);
    auto mix = parse_expr("1+2*x");
    REQUIRE(mix->kind == ExprKind::add);
    CHECK(mix->b->kind == ExprKind::mul);
    // left associativity
    auto sub = parse_expr("x-x-x");
    REQUIRE(sub->kind == ExprKind::sub);
    CHECK(sub->a->kind == ExprKind::sub);
  }

  TEST_CASE("syntax errors carry byte offsets") {
    try {
      parse_expr("2*(x");
      FAIL("expected SyntaxError");
    } catch (const Error& e) {
      CHECK(e.code() == errc::syntax_error);
      CHECK(e.position() == 4);
    }
    try {
      parse_expr("foo(x)");
      FAIL("expected UnknownFunction");
    } catch (const Error& e) {
      CHECK(e.code() == errc::unknown_function);
    }
    CHECK_THROWS_AS(parse_expr(""), Error);
    CHECK_THROWS_AS(parse_expr("x^"), Error);
    CHECK_THROWS_AS(parse_expr("x+"), Error);
  }

  TEST_CASE("evaluation") {
    auto e = parse_expr("2*x+sin(x)^2");
    const double x = 0.7;
    CHECK(eval_expr(e, x) ==
          doctest::Approx(2 * x + std::sin(x) * std::sin(x)).epsilon(1e-15));
    CHECK(eval_expr(parse_expr("x^-2"), 2.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(eval_expr(parse_expr("1/(x-1)"), 1.0), Error);
    CHECK_THROWS_AS(eval_expr(parse_expr("sqrt(x)"), -1.0), Error);
    CHECK_THROWS_AS(eval_expr(parse_expr("log1p(x)"), -2.0), Error);
    // quad-precision evaluation agrees with double
    CHECK(num::to_double(eval_expr<__float128>(e, __float128(0.7))) ==
          doctest::Approx(eval_expr(e, 0.7)).epsilon(1e-15));
  }

  TEST_CASE("differentiation basics") {
    auto ds = differentiate(parse_expr("sin(x)"), 1);
    CHECK(eval_expr(ds, 0.7) == doctest::Approx(std::cos(0.7)).epsilon(1e-14));
    auto same = differentiate(parse_expr("sin(x)"), 0);
    CHECK(expr_equal(same, parse_expr("sin(x)")));
    auto d2 = differentiate(parse_expr("x^3"), 2);
    for (double x : {0.0, 1.3, -2.0})
      CHECK(eval_expr(d2, x) == doctest::Approx(6 * x).epsilon(1e-14).scale(1.0));
    CHECK_THROWS_AS(differentiate(parse_expr("abs(x)"), 1), Error);
    CHECK_THROWS_AS(differentiate(parse_expr("x+abs(x)"), 1), Error);
  }

  TEST_CASE("derivatives match finite differences on the corpus") {
    const std::vector<std::string> corpus = {
        "sin(x)+x^3",     "x*exp(-x^2/4)+x", "1/(1+x^2)",        "atan(x)",
        "log1p(x^2)",     "cos(2*x)*x",      "sqrt(1+x^2)",      "x^5-3*x^2+1",
        "sin(x)*exp(-x)", "(x+1)/(x^2+2)"};
    std::mt19937_64 rng(7);
    auto uni = [&rng]() { return -3.0 + 6.0 * (rng() >> 11) / 9007199254740992.0; };
    for (const auto& src : corpus) {
      auto e = parse_expr(src);
      for (int order = 1; order <= 3; ++order) {
        auto d = differentiate(e, order);
        auto base = [&](double t) { return eval_expr(e, t); };
        for (int trial = 0; trial < 25; ++trial) {
          const double x = uni();
          const double sym = eval_expr(d, x);
          const double fd = oracles::central_diff(base, x, order);
          CHECK(sym == doctest::Approx(fd).epsilon(1e-7).scale(std::max(1.0, std::fabs(sym))));
        }
      }
    }
  }

  TEST_CASE("print/parse round trip is AST-identical") {
    const std::vector<std::string> corpus = {
        "sin(x)+x^3", "x*exp(-x^2/4)+x", "1/(1+x^2)",   "-x^2",        "2.5*x-0.125",
        "atan(x)^2",  "log1p(x^2)/x",    "(x+1)*(x-1)", "sqrt(1+x^2)", "x^-3"};
    for (const auto& src : corpus) {
      auto e = parse_expr(src);
      auto round = parse_expr(to_string(e));
      CHECK(expr_equal(e, round));
      // derivative trees round-trip too
      auto d = differentiate(e, 1);
      CHECK(expr_equal(d, parse_expr(to_string(d))));
    }
  }

  TEST_CASE("property: random trees survive print/parse round trips") {
    std::mt19937_64 rng(99);
    std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
      const int pick = depth <= 0 ? int(rng() % 2) : int(rng() % 8);
      switch (pick) {
        case 0: return expr_number((double(rng() % 2000) - 1000.0) / 64.0);
        case 1: return expr_var();
        case 2: return parse_expr("(" + to_string(gen(depth - 1)) + ")+(" +
                                  to_string(gen(depth - 1)) + ")");
        case 3: return parse_expr("(" + to_string(gen(depth - 1)) + ")-(" +
                                  to_string(gen(depth - 1)) + ")");
        case 4: return parse_expr("(" + to_string(gen(depth - 1)) + ")*(" +
                                  to_string(gen(depth - 1)) + ")");
        case 5: return parse_expr("-(" + to_string(gen(depth - 1)) + ")");
        case 6: return parse_expr("(" + to_string(gen(depth - 1)) + ")^" +
                                  std::to_string(int(rng() % 5)));
        default: {
          static const char* fns[] = {"sin", "cos", "exp", "atan", "log1p"};
          return parse_expr(std::string(fns[rng() % 5]) + "(" + to_string(gen(depth - 1)) + ")");
        }
      }
    };
    for (int trial = 0; trial < 60; ++trial) {
      ExprPtr tree = gen(3);
      ExprPtr round = parse_expr(to_string(tree));
      CHECK(expr_equal(tree, round));
      if (!expr_contains_abs(tree)) {
        ExprPtr d = differentiate(tree, 1);
        CHECK(expr_equal(d, parse_expr(to_string(d))));
      }
    }
  }

  TEST_CASE("smooth function wrapper") {
    auto f = make_smooth_fn<double>(parse_expr("x*exp(-x^2/4)+x"), 3);
    CHECK(f.max_order() == 3);
    CHECK(f(1.0) == doctest::Approx(std::exp(-0.25) + 1.0).epsilon(1e-14));
    CHECK_THROWS_AS(f.deriv(4, 1.0), Error);
  }
}
