// Command-line front end: weighted polynomial approximation on the real line
// under exponential weights, plus the inequality verification harness.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "wpa/cli.hpp"
#include "wpa/jsonio.hpp"

namespace {

struct FamilyFlags {
  std::string family = "freud";
  double alpha = 2.0;
  double c = 1.0;
  int l = 1;
  double m = 0.0;
  double t_exponent = 0.0;

  wpa::WeightSpec spec() const {
    wpa::WeightSpec s;
    if (family == "freud") s = wpa::WeightSpec::freud(alpha, c);
    else if (family == "iterexp") s = wpa::WeightSpec::iter_exp(l, alpha, m);
    else if (family == "tower") s = wpa::WeightSpec::power_tower(alpha);
    else throw wpa::Error("cli", wpa::errc::bad_config, "family must be freud, iterexp, or tower");
    return s.with_t_exponent(t_exponent);
  }
};

void add_family_flags(CLI::App* app, FamilyFlags& ff) {
  app->add_option("--family", ff.family, "weight family: freud | iterexp | tower");
  app->add_option("--alpha", ff.alpha, "family exponent alpha");
  app->add_option("--c", ff.c, "FreudPower scale c");
  app->add_option("--l", ff.l, "IterExp iteration depth (1..3)");
  app->add_option("--m", ff.m, "IterExp outer power m");
  app->add_option("--t-exponent", ff.t_exponent, "transform exponent mu in T^mu w");
}

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted polynomial approximation under exponential weights"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON run-config file (overrides subcommands)");

  FamilyFlags ff;
  wpa::RunConfig cfg;
  std::string p_str = "inf";

  auto* c_weight = app.add_subcommand("weight", "weight family utilities");
  auto* c_check = c_weight->add_subcommand("check", "verify the class conditions on a grid");
  add_family_flags(c_check, ff);
  c_check->add_option("--r", cfg.r, "smoothness order r");
  c_check->add_option("--lambda", cfg.lambda, "Definition ratio exponent lambda");
  c_check->add_option("--out", cfg.out, "output path");

  auto* c_mrs = app.add_subcommand("mrs", "Mhaskar-Rakhmanov-Saff numbers");
  add_family_flags(c_mrs, ff);
  c_mrs->add_option("--x", cfg.x_list, "abscissae");
  c_mrs->add_option("--out", cfg.out, "output path");

  auto* c_basis = app.add_subcommand("basis", "orthonormal basis construction");
  add_family_flags(c_basis, ff);
  c_basis->add_option("--nmax", cfg.nmax, "maximum degree");
  c_basis->add_option("--out", cfg.out, "output path");

  auto* c_approx = app.add_subcommand("approx", "weighted best approximation");
  add_family_flags(c_approx, ff);
  c_approx->add_option("--f", cfg.f_expr, "target expression");
  c_approx->add_option("--n", cfg.n, "polynomial degree");
  c_approx->add_option("--p", p_str, "norm index p (number or inf)");
  c_approx->add_option("--out", cfg.out, "output path");

  auto* c_mod = app.add_subcommand("modulus", "weighted modulus of smoothness");
  add_family_flags(c_mod, ff);
  c_mod->add_option("--f", cfg.f_expr, "target expression");
  c_mod->add_option("--t", cfg.t, "modulus scale t");
  c_mod->add_option("--p", p_str, "norm index p (number or inf)");
  c_mod->add_option("--out", cfg.out, "output path");

  auto* c_verify = app.add_subcommand("verify", "inequality verification harness");
  add_family_flags(c_verify, ff);
  c_verify->add_option("--theorem", cfg.theorem, "2.3 | 2.4 | 2.5 | 3.6 | 3.7 | 3.9 | 4.1 | jackson")
      ->required();
  c_verify->add_option("--f", cfg.f_expr, "target expression");
  c_verify->add_option("--r", cfg.r, "smoothness order r");
  c_verify->add_option("--variant", cfg.variant, "variant (for 2.4)");
  c_verify->add_option("--p", p_str, "norm index p");
  c_verify->add_option("--beta", cfg.beta, "sharp-weight exponent beta");
  c_verify->add_option("--n-list", cfg.n_list, "degrees to sweep");
  c_verify->add_option("--k", cfg.k, "derivative order (jackson)");
  c_verify->add_option("--seed", cfg.seed, "random seed (3.9)");
  c_verify->add_option("--precision", cfg.precision, "auto | double | quad");
  c_verify->add_option("--out", cfg.out, "output path (CSV; summary JSON beside it)");
  c_verify->add_option("--format", cfg.format, "csv | json");

  auto* c_mono = app.add_subcommand("monotone", "monotone approximation certificates");
  add_family_flags(c_mono, ff);
  c_mono->add_option("--f", cfg.f_expr, "target expression");
  c_mono->add_option("--op", cfg.op_expr, "operator, e.g. \"2*d0 + x*d1\"");
  c_mono->add_option("--delta", cfg.delta, "lower bound delta for L(f)");
  c_mono->add_option("--M", cfg.M, "certificate window [-M, M]");
  c_mono->add_option("--n-max", cfg.n_max, "degree sweep limit");
  c_mono->add_option("--out", cfg.out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw wpa::Error("cli", wpa::errc::io_error, "cannot read " + config_path);
      nlohmann::json j;
      in >> j;
      return wpa::run(wpa::RunConfig::from_json(j));
    }
    cfg.p = parse_p(p_str);
    cfg.spec = ff.spec();
    if (c_check->parsed()) cfg.command = "weight-check";
    else if (c_mrs->parsed()) cfg.command = "mrs";
    else if (c_basis->parsed()) cfg.command = "basis";
    else if (c_approx->parsed()) cfg.command = "approx";
    else if (c_mod->parsed()) cfg.command = "modulus";
    else if (c_verify->parsed()) cfg.command = "verify";
    else if (c_mono->parsed()) cfg.command = "monotone";
    else {
      std::cout << app.help() << std::endl;
      return 0;
    }
    return wpa::run(cfg);
  } catch (const wpa::Error& e) {
    nlohmann::json err = {
        {"module", e.module()}, {"code", e.code_name()}, {"message", e.detail()}};
    if (e.position() >= 0) err["offset"] = e.position();
    std::cerr << err.dump() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json({{"module", "cli"}, {"code", "Unknown"}, {"message", e.what()}})
                     .dump()
              << std::endl;
    return 1;
  }
}
