#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wpa/jsonio.hpp"
#include "wpa/weights.hpp"

using namespace wpa;

TEST_SUITE("weights") {
  TEST_CASE("Q values against closed forms") {
    const auto freud2 = WeightSpec::freud(2.0, 1.0);
    CHECK(eval_Q(freud2, 0.0, 0) == 0.0);
    CHECK(eval_Q(freud2, 3.0, 1) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(eval_Q(freud2, 2.0, 0) == doctest::Approx(4.0).epsilon(1e-13));

    const auto ie = WeightSpec::iter_exp(1, 2.0, 0.0);
    CHECK(eval_Q(ie, 1.0, 0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    // small-argument evaluation stays cancellation-free
    CHECK(eval_Q(ie, 1e-8, 0) == doctest::Approx(1e-16).epsilon(1e-10));

    const auto tower = WeightSpec::power_tower(2.0);
    // Q(1) = 2^1 - 1
    CHECK(eval_Q(tower, 1.0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eval_Q(tower, 2.0, 0) == doctest::Approx(std::pow(3.0, 4.0) - 1.0).epsilon(1e-13));
  }

  TEST_CASE("derivative orders and kink handling") {
    const auto freud2 = WeightSpec::freud(2.0, 1.0);
    CHECK(eval_Q(freud2, 0.0, 2) == doctest::Approx(2.0));  // analytic family
    CHECK_THROWS_AS(eval_Q(freud2, 1.0, kJetOrder + 1), Error);

    const auto tower = WeightSpec::power_tower(2.0);
    CHECK(eval_Q(tower, 0.0, 1) == 0.0);
    CHECK_THROWS_AS(eval_Q(tower, 0.0, 2), Error);

    const auto kinked = WeightSpec::iter_exp(1, 2.0, 1.0);  // |x| factor
    CHECK_THROWS_AS(eval_Q(kinked, 0.0, 2), Error);
  }

  TEST_CASE("derivatives match high-order finite differences") {
    const std::vector<WeightSpec> specs = {
        WeightSpec::freud(2.0, 1.0), WeightSpec::freud(4.0, 1.0), WeightSpec::iter_exp(1, 2.0, 0.0),
        WeightSpec::power_tower(2.0)};
    for (const auto& spec : specs) {
      for (double x : {0.5, 0.8, 1.3, 2.2, 3.5, 5.0}) {
        auto q0 = [&](double t) { return eval_Q(spec, t, 0); };
        auto q1 = [&](double t) { return eval_Q(spec, t, 1); };
        const double h = 1e-3 * std::max(1.0, x);
        const double d1 = oracles::central_diff(q0, x, 1, h);
        const double d2 = oracles::central_diff(q1, x, 1, h);
        CHECK(eval_Q(spec, x, 1) == doctest::Approx(d1).epsilon(1e-6));
        CHECK(eval_Q(spec, x, 2) == doctest::Approx(d2).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("T function closed forms and symmetry") {
    const auto freud2 = WeightSpec::freud(2.0, 1.0);
    const auto freud4 = WeightSpec::freud(4.0, 1.0);
    for (double x : {0.1, 1.0, 7.3}) {
      CHECK(eval_T(freud2, x) == 2.0);
      CHECK(eval_T(freud4, x) == 4.0);
    }
    const auto ie = WeightSpec::iter_exp(1, 2.0, 0.0);
    const double e = std::exp(1.0);
    CHECK(eval_T(ie, 1.0) == doctest::Approx(2 * e / (e - 1)).epsilon(1e-13));
    CHECK(eval_T(ie, 0.0) == doctest::Approx(2.0));
    CHECK(eval_T(WeightSpec::power_tower(2.0), 0.0) == doctest::Approx(3.0));

    for (const auto& spec :
         {freud2, ie, WeightSpec::power_tower(2.0), WeightSpec::iter_exp(2, 2.0, 0.0)}) {
      for (double x : {0.3, 1.7, 2.9}) {
        CHECK(eval_T(spec, x) == eval_T(spec, -x));    // bitwise
        CHECK(eval_Q(spec, x, 0) == eval_Q(spec, -x, 0));
        CHECK(eval_Q(spec, x, 1) == -eval_Q(spec, -x, 1));
        CHECK(eval_w(spec, x) == eval_w(spec, -x));
      }
    }
  }

  TEST_CASE("w values including the T^mu transform") {
    const auto freud2 = WeightSpec::freud(2.0, 1.0);
    CHECK(eval_w(freud2, 0.0) == 1.0);
    CHECK(eval_w(freud2, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    const auto w14 = freud2.with_t_exponent(0.25);
    CHECK(eval_w(w14, 1.0) ==
          doctest::Approx(std::pow(2.0, 0.25) * std::exp(-1.0)).epsilon(1e-14));
    // sharp/flat factors at p = infinity collapse to w
    auto sharp = freud2;
    LpFlavor fl;
    fl.p = std::numeric_limits<double>::infinity();
    fl.beta = 1.5;
    fl.sign = LpFlavor::Sign::sharp;
    sharp.lp_flavor = fl;
    CHECK(eval_w(sharp, 1.3) == eval_w(freud2, 1.3));
    // finite p: sharp < w < flat
    fl.p = 2.0;
    sharp.lp_flavor = fl;
    auto flat = sharp;
    flat.lp_flavor->sign = LpFlavor::Sign::flat;
    CHECK(eval_w(sharp, 1.3) < eval_w(freud2, 1.3));
    CHECK(eval_w(flat, 1.3) > eval_w(freud2, 1.3));
  }

  TEST_CASE("overflow clamps w to zero, never NaN or Inf") {
    for (const auto& spec : {WeightSpec::iter_exp(3, 2.0, 0.0), WeightSpec::iter_exp(2, 2.0, 0.0),
                             WeightSpec::power_tower(2.0), WeightSpec::freud(2.0, 1.0)}) {
      for (double x : {3.0, 10.0, 100.0, 1e6, 1e150}) {
        const double w = eval_w(spec, x);
        CHECK(std::isfinite(w));
        CHECK(w >= 0.0);
      }
      CHECK(eval_w(spec, 1e6) == 0.0);
    }
  }

  TEST_CASE("monotone decay on the positive axis") {
    for (const auto& spec :
         {WeightSpec::freud(2.0, 1.0), WeightSpec::iter_exp(1, 2.0, 0.0),
          WeightSpec::power_tower(2.0), WeightSpec::freud(2.0, 1.0).with_t_exponent(0.25),
          WeightSpec::iter_exp(1, 2.0, 0.0).with_t_exponent(-0.25)}) {
      double prev = eval_w(spec, 0.0);
      for (int i = 1; i <= 200; ++i) {
        const double x = 0.05 * i;
        const double w = eval_w(spec, x);
        CHECK(w <= prev * (1 + 1e-12));
        prev = w;
      }
    }
  }

  TEST_CASE("class membership for the shipped families") {
    auto rep2 = check_class(WeightSpec::freud(2.0, 1.0), standard_grid(WeightSpec::freud(2.0, 1.0)),
                            2, 0.9);
    CHECK(rep2.pass());
    CHECK(rep2.T_min == doctest::Approx(2.0));
    CHECK(rep2.quasi_increase_C == doctest::Approx(1.0).epsilon(1e-9));

    auto rep4 = check_class(WeightSpec::freud(4.0, 1.0), standard_grid(WeightSpec::freud(4.0, 1.0)),
                            2, 0.9);
    CHECK(rep4.pass());
    CHECK(rep4.T_min == doctest::Approx(4.0));

    const auto ie = WeightSpec::iter_exp(1, 2.0, 0.0);
    auto rep_ie = check_class(ie, standard_grid(ie), 2, 1.1);
    CHECK(rep_ie.pass());
    CHECK(rep_ie.T_min > 1.0);

    const auto tower = WeightSpec::power_tower(2.0);
    auto rep_t = check_class(tower, standard_grid(tower), 2, 1.1);
    CHECK(rep_t.pass());
  }

  TEST_CASE("class check grid preconditions") {
    const auto spec = WeightSpec::freud(2.0, 1.0);
    std::vector<double> tiny = {-4, -3, -2, -1, 1, 2, 3, 4};
    CHECK_THROWS_AS(check_class(spec, tiny, 2, 0.9), Error);
    try {
      check_class(spec, tiny, 2, 0.9);
    } catch (const Error& e) {
      CHECK(e.code() == errc::grid_too_small);
    }
    std::vector<double> asym;
    for (int i = 1; i <= 20; ++i) asym.push_back(0.1 * i);
    CHECK_THROWS_AS(check_class(spec, asym, 2, 0.9), Error);
  }

  TEST_CASE("spec JSON round trip") {
    auto spec = WeightSpec::iter_exp(2, 2.0, 0.5).with_t_exponent(0.25);
    LpFlavor fl;
    fl.p = 4.0;
    fl.beta = 1.5;
    fl.sign = LpFlavor::Sign::flat;
    spec.lp_flavor = fl;
    auto j = weight_spec_to_json(spec);
    CHECK(j.at("family") == "IterExp");
    auto back = weight_spec_from_json(j);
    CHECK(back.family == spec.family);
    CHECK(back.l == spec.l);
    CHECK(back.alpha == spec.alpha);
    CHECK(back.m == spec.m);
    CHECK(back.t_exponent == spec.t_exponent);
    REQUIRE(back.lp_flavor.has_value());
    CHECK(back.lp_flavor->p == 4.0);
    CHECK(back.lp_flavor->sign == LpFlavor::Sign::flat);

    auto base = WeightSpec::freud(2.0, 1.0);
    auto jb = weight_spec_to_json(base);
    CHECK(jb.at("lp_flavor").is_null());
    CHECK(weight_spec_from_json(jb).family == WeightFamily::freud_power);
  }

  TEST_CASE("property: random specs satisfy the structural invariants") {
    std::mt19937_64 rng(424242);
    auto uni = [&rng](double lo, double hi) {
      return lo + (hi - lo) * double(rng() >> 11) / 9007199254740992.0;
    };
    for (int trial = 0; trial < 40; ++trial) {
      WeightSpec spec;
      switch (trial % 3) {
        case 0: spec = WeightSpec::freud(uni(1.1, 5.0), uni(0.3, 3.0)); break;
        case 1: {
          double alpha = uni(0.5, 3.0);
          double m = uni(0.0, 2.0);
          if (alpha + m <= 1.0) m = 1.1 - alpha + 0.5;
          spec = WeightSpec::iter_exp(1 + int(rng() % 2), alpha, m);
          break;
        }
        default: spec = WeightSpec::power_tower(uni(1.2, 3.0)); break;
      }
      CAPTURE(spec.cache_key());
      CHECK(eval_Q(spec, 0.0) == 0.0);
      double prev_w = eval_w(spec, 0.0);
      for (int i = 1; i <= 40; ++i) {
        const double x = 0.12 * i;
        CHECK(eval_Q(spec, x, 0) == eval_Q(spec, -x, 0));   // bitwise even
        CHECK(eval_Q(spec, x, 1) == -eval_Q(spec, -x, 1));  // bitwise odd
        CHECK(eval_w(spec, x) == eval_w(spec, -x));
        CHECK(eval_T(spec, x) == eval_T(spec, -x));
        const double w = eval_w(spec, x);
        CHECK(std::isfinite(w));
        CHECK(w <= prev_w * (1 + 1e-12));
        prev_w = w;
        CHECK(eval_T(spec, x) > 1.0);
        CHECK(eval_Q(spec, x, 1) >= 0.0);
      }
    }
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(WeightSpec::freud(0.5, 1.0), Error);
    CHECK_THROWS_AS(WeightSpec::iter_exp(1, 0.5, 0.25), Error);  // alpha + m <= 1
    CHECK_THROWS_AS(WeightSpec::iter_exp(4, 2.0, 0.0), Error);
    CHECK_THROWS_AS(WeightSpec::power_tower(1.0), Error);
  }
}
