#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "wpa/cli.hpp"
#include "wpa/jsonio.hpp"

using namespace wpa;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("verify runs end to end and writes atomically") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.theorem = "3.6";
    cfg.f_expr = "sin(x)";
    cfg.n_list = {4, 8};
    cfg.out = "/tmp/wpa_test_36.csv";
    std::string captured;
    const int rc = run(cfg, &captured);
    CHECK(rc == 0);
    const std::string csv = slurp(cfg.out);
    CHECK(csv.rfind("n,lhs,rhs,ratio,ortho_residual\n", 0) == 0);
    CHECK(slurp("/tmp/wpa_test_36.summary.json").find("\"verdict\"") != std::string::npos);
    std::remove("/tmp/wpa_test_36.csv");
    std::remove("/tmp/wpa_test_36.summary.json");
  }

  TEST_CASE("identical configs give byte-identical CSV output") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.theorem = "2.3";
    cfg.f_expr = "sin(x)";
    cfg.r = 1;
    cfg.n_list = {4, 6};
    cfg.precision = "double";
    std::string a, b;
    CHECK(run(cfg, &a) == 0);
    CHECK(run(cfg, &b) == 0);
    CHECK(a == b);
    CHECK(!a.empty());
  }

  TEST_CASE("mrs emits JSON lines with the round-trip check") {
    RunConfig cfg;
    cfg.command = "mrs";
    cfg.x_list = {1.0, 4.0};
    std::string out;
    CHECK(run(cfg, &out) == 0);
    auto nl = out.find('\n');
    auto first = nlohmann::json::parse(out.substr(0, nl));
    CHECK(first.at("x") == 1.0);
    CHECK(first.at("a_x").get<double>() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(first.at("sigma_inverse_check").get<double>() <= 1e-8);
  }

  TEST_CASE("weight-check, basis, approx, modulus, monotone smoke") {
    std::string out;
    RunConfig cfg;
    cfg.command = "weight-check";
    CHECK(run(cfg, &out) == 0);
    CHECK(nlohmann::json::parse(out).at("pass") == true);

    out.clear();
    cfg = RunConfig{};
    cfg.command = "basis";
    cfg.nmax = 6;
    CHECK(run(cfg, &out) == 0);
    CHECK(nlohmann::json::parse(out).at("beta_rec").size() == 7);

    out.clear();
    cfg = RunConfig{};
    cfg.command = "approx";
    cfg.f_expr = "x";
    cfg.n = 0;
    CHECK(run(cfg, &out) == 0);
    CHECK(nlohmann::json::parse(out).at("error").get<double>() ==
          doctest::Approx(0.42888194248035344).epsilon(1e-5));

    out.clear();
    cfg = RunConfig{};
    cfg.command = "modulus";
    cfg.f_expr = "x";
    cfg.t = 0.5;
    CHECK(run(cfg, &out) == 0);
    CHECK(nlohmann::json::parse(out).at("omega").get<double>() > 0);

    out.clear();
    cfg = RunConfig{};
    cfg.command = "monotone";
    cfg.f_expr = "x";
    cfg.op_expr = "d1";
    cfg.delta = 1.0;
    cfg.M = 2.0;
    cfg.n_max = 6;
    CHECK(run(cfg, &out) == 0);
    CHECK(nlohmann::json::parse(out).at("pass") == true);
  }

  TEST_CASE("config JSON round trip") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.theorem = "4.1";
    cfg.f_expr = "x*exp(-x^2/4)+x";
    cfg.p = 2.0;
    cfg.n_list = {6, 10};
    cfg.spec = WeightSpec::iter_exp(1, 2.0, 0.0);
    auto j = cfg.to_json();
    auto back = RunConfig::from_json(j);
    CHECK(back.command == cfg.command);
    CHECK(back.theorem == cfg.theorem);
    CHECK(back.f_expr == cfg.f_expr);
    CHECK(back.p == cfg.p);
    CHECK(back.n_list == cfg.n_list);
    CHECK(back.spec.family == WeightFamily::iter_exp);
  }

  TEST_CASE("errors carry module, code, and message") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.theorem = "2.3";
    cfg.f_expr = "2*(x";
    cfg.n_list = {4};
    try {
      std::string sink;
      run(cfg, &sink);
      FAIL("expected a syntax error");
    } catch (const Error& e) {
      CHECK(e.module() == "cli");
      CHECK(std::string(e.code_name()) == "SyntaxError");
      CHECK(e.position() == 4);
    }
    cfg.theorem = "9.9";
    cfg.f_expr = "x";
    CHECK_THROWS_AS({ std::string sink; run(cfg, &sink); }, Error);
    cfg.command = "nope";
    CHECK_THROWS_AS({ std::string sink; run(cfg, &sink); }, Error);
  }

  TEST_CASE("verdict failures exit with code 2") {
    RunConfig cfg;
    cfg.command = "monotone";
    cfg.f_expr = "2+cos(x)";
    cfg.op_expr = "d0";
    cfg.delta = 1.0;
    cfg.M = 5.0;
    cfg.n_max = 3;
    std::string out;
    CHECK(run(cfg, &out) == 2);
  }

  TEST_CASE("float formatting is shortest-round-trip") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(2.0) == "2");
    CHECK(fmt17(std::numeric_limits<double>::infinity()) == "inf");
  }
}
