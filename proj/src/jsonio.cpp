#include "wpa/jsonio.hpp"

#include <cstdio>
#include <fstream>

namespace wpa {

std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json weight_spec_to_json(const WeightSpec& spec) {
  nlohmann::json params;
  switch (spec.family) {
    case WeightFamily::freud_power:
      params = {{"alpha", spec.alpha}, {"c", spec.c}};
      break;
    case WeightFamily::iter_exp:
      params = {{"l", spec.l}, {"alpha", spec.alpha}, {"m", spec.m}};
      break;
    case WeightFamily::power_tower:
      params = {{"alpha", spec.alpha}};
      break;
  }
  nlohmann::json j = {
      {"family", spec.family_name()}, {"params", params}, {"t_exponent", spec.t_exponent}};
  if (spec.lp_flavor) {
    const auto& fl = *spec.lp_flavor;
    j["lp_flavor"] = {{"p", std::isinf(fl.p) ? nlohmann::json("inf") : nlohmann::json(fl.p)},
                      {"beta", fl.beta},
                      {"sign", fl.sign == LpFlavor::Sign::sharp ? "sharp" : "flat"}};
  } else {
    j["lp_flavor"] = nullptr;
  }
  return j;
}

WeightSpec weight_spec_from_json(const nlohmann::json& j) {
  WeightSpec spec;
  const std::string fam = j.at("family").get<std::string>();
  const auto& p = j.at("params");
  if (fam == "FreudPower") {
    spec.family = WeightFamily::freud_power;
    spec.alpha = p.at("alpha").get<double>();
    spec.c = p.value("c", 1.0);
  } else if (fam == "IterExp") {
    spec.family = WeightFamily::iter_exp;
    spec.l = p.at("l").get<int>();
    spec.alpha = p.at("alpha").get<double>();
    spec.m = p.value("m", 0.0);
  } else if (fam == "PowerTower") {
    spec.family = WeightFamily::power_tower;
    spec.alpha = p.at("alpha").get<double>();
  } else {
    throw Error("cli", errc::bad_config, "unknown weight family '" + fam + "'");
  }
  spec.t_exponent = j.value("t_exponent", 0.0);
  if (j.contains("lp_flavor") && !j.at("lp_flavor").is_null()) {
    const auto& fj = j.at("lp_flavor");
    LpFlavor fl;
    if (fj.at("p").is_string())
      fl.p = std::numeric_limits<double>::infinity();
    else
      fl.p = fj.at("p").get<double>();
    fl.beta = fj.at("beta").get<double>();
    const std::string sign = fj.at("sign").get<std::string>();
    if (sign == "sharp") fl.sign = LpFlavor::Sign::sharp;
    else if (sign == "flat") fl.sign = LpFlavor::Sign::flat;
    else throw Error("cli", errc::bad_config, "lp_flavor sign must be sharp or flat");
    spec.lp_flavor = fl;
  }
  spec.validate();
  return spec;
}

nlohmann::json class_report_to_json(const WeightClassReport& rep) {
  nlohmann::json flags;
  for (const auto& [k, v] : rep.condition_flags) flags[k] = v;
  return {{"condition_flags", flags},
          {"lambda_hat", rep.lambda_hat},
          {"T_min", rep.T_min},
          {"quasi_increase_C", rep.quasi_increase_C},
          {"K", rep.K},
          {"lambda", rep.lambda},
          {"r", rep.r},
          {"grid_size", rep.grid.size()},
          {"pass", rep.pass()}};
}

nlohmann::json basis_to_json(const OrthoBasis<double>& basis) {
  return {{"spec", weight_spec_to_json(basis.spec())},
          {"nmax", basis.nmax()},
          {"alpha_rec", basis.alpha_rec()},
          {"beta_rec", basis.beta_rec()},
          {"domain", {-basis.xmax(), basis.xmax()}}};
}

nlohmann::json approx_result_to_json(const ApproxResult<double>& res) {
  nlohmann::json alt = nlohmann::json::array();
  for (const auto& [x, r] : res.alternation) alt.push_back({{"x", x}, {"residual", r}});
  return {{"degree", res.poly.degree()},
          {"basis_coeffs", res.poly.coeffs},
          {"error", res.error},
          {"p", std::isinf(res.p) ? nlohmann::json("inf") : nlohmann::json(res.p)},
          {"alternation", alt},
          {"flags", res.flags}};
}

nlohmann::json modulus_report_to_json(const ModulusReport& rep) {
  return {{"main_term", rep.main_term},
          {"tail_term", rep.tail_term},
          {"omega", rep.omega},
          {"t", rep.t},
          {"p", std::isinf(rep.p) ? nlohmann::json("inf") : nlohmann::json(rep.p)},
          {"sigma_2t", rep.sigma_2t},
          {"sigma_4t", rep.sigma_4t},
          {"best_c", rep.best_c}};
}

nlohmann::json ratio_table_to_json(const RatioTable& tbl) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : tbl.rows)
    rows.push_back({{"n", r.n},
                    {"k", r.k},
                    {"p", std::isinf(r.p) ? nlohmann::json("inf") : nlohmann::json(r.p)},
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"rhs2", r.rhs2},
                    {"ratio", r.ratio},
                    {"degenerate", r.degenerate}});
  nlohmann::json spread;
  for (const auto& [k, v] : tbl.per_k_spread) spread[std::to_string(k)] = v;
  return {{"rows", rows},
          {"empirical_C", tbl.empirical_C},
          {"verdict", tbl.verdict ? "pass" : "fail"},
          {"per_k_spread", spread},
          {"chain_ok", tbl.chain_ok},
          {"precision", tbl.precision},
          {"stability_threshold", tbl.stability_threshold}};
}

nlohmann::json certificate_to_json(const MonotoneCertificate& cert) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [n, v] : cert.history) hist.push_back({{"n", n}, {"min_LP", v}});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : cert.transfer_rows)
    rows.push_back({{"n", r.n}, {"j", r.j}, {"lhs", r.lhs}, {"rhs", r.rhs}});
  return {{"pass", cert.pass},
          {"n_star", cert.n_star},
          {"min_LP", cert.min_LP},
          {"delta", cert.delta},
          {"M", cert.M},
          {"history", hist},
          {"transfer_rows", rows},
          {"n_sufficient", cert.n_sufficient}};
}

std::string ratio_table_to_csv(const RatioTable& tbl) {
  std::string s = "n,k,p,lhs,rhs,rhs2,ratio\n";
  for (const auto& r : tbl.rows) {
    s += std::to_string(r.n) + "," + std::to_string(r.k) + "," + fmt17(r.p) + "," + fmt17(r.lhs) +
         "," + fmt17(r.rhs) + "," + fmt17(r.rhs2) + "," + fmt17(r.ratio) + "\n";
  }
  return s;
}

std::string jackson_table_to_csv(const JacksonTable& tbl) {
  std::string s = "n,a_n,E,omega,bound,ratio1,ratio2\n";
  for (const auto& r : tbl.rows) {
    s += std::to_string(r.n) + "," + fmt17(r.a_n) + "," + fmt17(r.E) + "," + fmt17(r.omega) + "," +
         fmt17(r.bound) + "," + fmt17(r.ratio1) + "," + fmt17(r.ratio2) + "\n";
  }
  return s;
}

std::string bernstein_report_to_csv(const BernsteinReport& rep) {
  std::string s = "n,k,empirical_C\n";
  for (const auto& r : rep.rows)
    s += std::to_string(r.n) + "," + std::to_string(r.k) + "," + fmt17(r.emp_C) + "\n";
  return s;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cli", errc::io_error, "cannot open " + tmp);
    out << content;
    if (!out.good()) throw Error("cli", errc::io_error, "short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cli", errc::io_error, "rename " + tmp + " -> " + path + " failed");
}

}  // namespace wpa
