#include "wpa/cli.hpp"

#include <iostream>

#include "wpa/jsonio.hpp"

namespace wpa {

namespace {

void emit(const std::string& text, const std::string& out_path, std::string* capture) {
  if (!out_path.empty()) write_atomic(out_path, text);
  if (capture) *capture += text;
  if (out_path.empty() && !capture) std::cout << text;
}

std::string summary_path(const std::string& out) {
  auto dot = out.find_last_of('.');
  return (dot == std::string::npos ? out : out.substr(0, dot)) + ".summary.json";
}

Precision parse_precision(const std::string& s) {
  if (s == "auto") return Precision::automatic;
  if (s == "double") return Precision::dbl;
  if (s == "quad") return Precision::quad;
  throw Error("cli", errc::bad_config, "precision must be auto, double, or quad");
}

int run_verify(const RunConfig& cfg, std::string* capture) {
  const ExprPtr f = parse_expr(cfg.f_expr);
  std::vector<int> n_list = cfg.n_list;
  if (n_list.empty()) n_list = {6, 10, 14};
  for (size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i] >= n_list[i + 1])
      throw Error("cli", errc::bad_config, "n_list must be strictly increasing");

  auto finish_table = [&](const RatioTable& tbl) {
    const std::string body =
        cfg.format == "json" ? ratio_table_to_json(tbl).dump(2) + "\n" : ratio_table_to_csv(tbl);
    emit(body, cfg.out, capture);
    nlohmann::json summary = {{"empirical_C", tbl.empirical_C},
                              {"verdict", tbl.verdict ? "pass" : "fail"},
                              {"precision", tbl.precision}};
    const std::string sm = summary.dump(2) + "\n";
    if (!cfg.out.empty()) write_atomic(summary_path(cfg.out), sm);
    if (capture) *capture += sm;
    else if (cfg.out.empty()) std::cout << sm;
    return tbl.verdict ? 0 : 2;
  };

  TransferConfig tc;
  tc.p = cfg.p;
  tc.beta = cfg.beta;
  tc.precision = parse_precision(cfg.precision);

  if (cfg.theorem == "2.3") {
    tc.kind = TransferKind::derivative_transfer;
    return finish_table(verify_transfer(f, cfg.r, cfg.spec, n_list, tc));
  }
  if (cfg.theorem == "2.4") {
    tc.kind = cfg.variant == 2 ? TransferKind::transfer_shift_minus
                               : TransferKind::derivative_transfer;
    return finish_table(verify_transfer(f, cfg.r, cfg.spec, n_list, tc));
  }
  if (cfg.theorem == "2.5") {
    tc.kind = TransferKind::transfer_shift_per_k;
    return finish_table(verify_transfer(f, cfg.r, cfg.spec, n_list, tc));
  }
  if (cfg.theorem == "4.1") {
    tc.kind = TransferKind::lp_transfer;
    return finish_table(verify_transfer(f, cfg.r, cfg.spec, n_list, tc));
  }
  if (cfg.theorem == "3.6" || cfg.theorem == "3.7") {
    nlohmann::json rows = nlohmann::json::array();
    std::string csv = cfg.theorem == "3.6" ? "n,lhs,rhs,ratio,ortho_residual\n"
                                           : "n,err_F,bound_F,err_S,bound_S,deg_S\n";
    bool ok = true;
    for (int n : n_list) {
      if (cfg.theorem == "3.6") {
        auto rep = verify_integral_remainder(f, cfg.spec, n);
        ok = ok && std::isfinite(rep.ratio) && rep.ortho_residual <= 1e-8;
        csv += std::to_string(rep.n) + "," + fmt17(rep.lhs) + "," + fmt17(rep.rhs) + "," +
               fmt17(rep.ratio) + "," + fmt17(rep.ortho_residual) + "\n";
        rows.push_back({{"n", rep.n},
                        {"lhs", rep.lhs},
                        {"rhs", rep.rhs},
                        {"ratio", rep.ratio},
                        {"ortho_residual", rep.ortho_residual}});
      } else {
        auto rep = verify_spliced_antiderivative(f, cfg.spec, n);
        ok = ok && rep.deg_S <= 2 * n && std::isfinite(rep.err_F) && std::isfinite(rep.err_S);
        csv += std::to_string(rep.n) + "," + fmt17(rep.err_F) + "," + fmt17(rep.bound_F) + "," +
               fmt17(rep.err_S) + "," + fmt17(rep.bound_S) + "," + std::to_string(rep.deg_S) +
               "\n";
        rows.push_back({{"n", rep.n},
                        {"err_F", rep.err_F},
                        {"bound_F", rep.bound_F},
                        {"err_S", rep.err_S},
                        {"bound_S", rep.bound_S},
                        {"deg_S", rep.deg_S}});
      }
    }
    emit(cfg.format == "json" ? rows.dump(2) + "\n" : csv, cfg.out, capture);
    nlohmann::json summary = {{"verdict", ok ? "pass" : "fail"}};
    const std::string sm = summary.dump(2) + "\n";
    if (!cfg.out.empty()) write_atomic(summary_path(cfg.out), sm);
    if (capture) *capture += sm;
    else if (cfg.out.empty()) std::cout << sm;
    return ok ? 0 : 2;
  }
  if (cfg.theorem == "3.9") {
    auto rep = bernstein_check(cfg.spec, n_list, {1, 2}, 50, cfg.seed);
    if (cfg.format == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : rep.rows)
        rows.push_back({{"n", r.n}, {"k", r.k}, {"empirical_C", r.emp_C}});
      emit(rows.dump(2) + "\n", cfg.out, capture);
    } else {
      emit(bernstein_report_to_csv(rep), cfg.out, capture);
    }
    nlohmann::json summary = {{"verdict", rep.pass ? "pass" : "fail"}};
    const std::string sm = summary.dump(2) + "\n";
    if (!cfg.out.empty()) write_atomic(summary_path(cfg.out), sm);
    if (capture) *capture += sm;
    else if (cfg.out.empty()) std::cout << sm;
    return rep.pass ? 0 : 2;
  }
  if (cfg.theorem == "jackson") {
    const int order = std::max(cfg.k, 1);
    SmoothFn<double> fs = make_smooth_fn<double>(f, order);
    const int max_n = *std::max_element(n_list.begin(), n_list.end());
    OrthoBasis<double> basis = OrthoBasis<double>::build(cfg.spec, max_n + 1);
    auto tbl = jackson_check(fs, basis, *basis.solver(), cfg.p, n_list, order);
    emit(jackson_table_to_csv(tbl), cfg.out, capture);
    bool ok = true;
    for (auto& row : tbl.rows) ok = ok && std::isfinite(row.ratio1) && std::isfinite(row.ratio2);
    nlohmann::json summary = {{"verdict", ok ? "pass" : "fail"}};
    const std::string sm = summary.dump(2) + "\n";
    if (!cfg.out.empty()) write_atomic(summary_path(cfg.out), sm);
    if (capture) *capture += sm;
    else if (cfg.out.empty()) std::cout << sm;
    return ok ? 0 : 2;
  }
  throw Error("cli", errc::bad_config, "unknown theorem id '" + cfg.theorem + "'");
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  return {{"command", command},
          {"family", weight_spec_to_json(spec)},
          {"theorem", theorem},
          {"f", f_expr},
          {"r", r},
          {"variant", variant},
          {"p", std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p)},
          {"beta", beta},
          {"n_list", n_list},
          {"precision", precision},
          {"seed", seed},
          {"k", k},
          {"n", n},
          {"nmax", nmax},
          {"t", t},
          {"op", op_expr},
          {"delta", delta},
          {"M", M},
          {"n_max", n_max},
          {"x_list", x_list},
          {"lambda", lambda},
          {"out", out},
          {"format", format}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  if (j.contains("family")) c.spec = weight_spec_from_json(j.at("family"));
  c.theorem = j.value("theorem", c.theorem);
  c.f_expr = j.value("f", c.f_expr);
  c.r = j.value("r", c.r);
  c.variant = j.value("variant", c.variant);
  if (j.contains("p")) {
    if (j.at("p").is_string()) c.p = std::numeric_limits<double>::infinity();
    else c.p = j.at("p").get<double>();
  }
  c.beta = j.value("beta", c.beta);
  if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<int>>();
  c.precision = j.value("precision", c.precision);
  c.seed = j.value("seed", c.seed);
  c.k = j.value("k", c.k);
  c.n = j.value("n", c.n);
  c.nmax = j.value("nmax", c.nmax);
  c.t = j.value("t", c.t);
  c.op_expr = j.value("op", c.op_expr);
  c.delta = j.value("delta", c.delta);
  c.M = j.value("M", c.M);
  c.n_max = j.value("n_max", c.n_max);
  if (j.contains("x_list")) c.x_list = j.at("x_list").get<std::vector<double>>();
  c.lambda = j.value("lambda", c.lambda);
  c.out = j.value("out", c.out);
  c.format = j.value("format", c.format);
  return c;
}

int run(const RunConfig& cfg, std::string* capture) {
  if (cfg.command == "weight-check") {
    auto rep = check_class(cfg.spec, standard_grid(cfg.spec), cfg.r, cfg.lambda);
    emit(class_report_to_json(rep).dump(2) + "\n", cfg.out, capture);
    return rep.pass() ? 0 : 2;
  }
  if (cfg.command == "mrs") {
    MrsSolver<double> solver(cfg.spec);
    std::vector<double> xs = cfg.x_list;
    if (xs.empty()) xs = {1, 2, 4, 8, 16, 32};
    std::string lines;
    for (double x : xs) {
      const double a = solver.mrs_number(x);
      double check = std::numeric_limits<double>::quiet_NaN();
      try {
        check = std::fabs(solver.sigma(a / x) - a) / a;
      } catch (const Error&) {
      }
      lines += nlohmann::json({{"x", x}, {"a_x", a}, {"sigma_inverse_check", check}}).dump() + "\n";
    }
    emit(lines, cfg.out, capture);
    return 0;
  }
  if (cfg.command == "basis") {
    auto basis = OrthoBasis<double>::build(cfg.spec, cfg.nmax);
    emit(basis_to_json(basis).dump(2) + "\n", cfg.out, capture);
    return 0;
  }
  if (cfg.command == "approx") {
    const ExprPtr f = parse_expr(cfg.f_expr);
    auto basis = OrthoBasis<double>::build(cfg.spec, std::max(cfg.nmax, cfg.n + 2));
    auto fn = [&f](double x) { return eval_expr(f, x); };
    auto res = best_approx<double>(fn, basis, cfg.n, cfg.p);
    emit(approx_result_to_json(res).dump(2) + "\n", cfg.out, capture);
    return 0;
  }
  if (cfg.command == "modulus") {
    const ExprPtr f = parse_expr(cfg.f_expr);
    MrsSolver<double> solver(cfg.spec);
    auto fn = [&f](double x) { return eval_expr(f, x); };
    auto rep = omega_report(fn, solver, cfg.p, cfg.t);
    emit(modulus_report_to_json(rep).dump(2) + "\n", cfg.out, capture);
    return 0;
  }
  if (cfg.command == "verify") return run_verify(cfg, capture);
  if (cfg.command == "monotone") {
    const ExprPtr f = parse_expr(cfg.f_expr);
    OperatorL op = parse_operator(cfg.op_expr);
    auto cert = monotone_approx(f, op, cfg.delta, cfg.M, cfg.spec, cfg.n_max);
    emit(certificate_to_json(cert).dump(2) + "\n", cfg.out, capture);
    return cert.pass ? 0 : 2;
  }
  throw Error("cli", errc::bad_config, "unknown command '" + cfg.command + "'");
}

}  // namespace wpa
