#pragma once

// JSON wire formats. Field names here are part of the tool's external
// interface; keep them stable.

#include <string>

#include <json.hpp>

#include "wpa/bestapprox.hpp"
#include "wpa/modulus.hpp"
#include "wpa/monotone.hpp"
#include "wpa/orthopoly.hpp"
#include "wpa/verify.hpp"
#include "wpa/weights.hpp"

namespace wpa {

// 17-significant-digit shortest round-trip formatting for reproducible output.
std::string fmt17(double v);

nlohmann::json weight_spec_to_json(const WeightSpec& spec);
WeightSpec weight_spec_from_json(const nlohmann::json& j);

nlohmann::json class_report_to_json(const WeightClassReport& rep);
nlohmann::json basis_to_json(const OrthoBasis<double>& basis);
nlohmann::json approx_result_to_json(const ApproxResult<double>& res);
nlohmann::json modulus_report_to_json(const ModulusReport& rep);
nlohmann::json ratio_table_to_json(const RatioTable& tbl);
nlohmann::json certificate_to_json(const MonotoneCertificate& cert);

std::string ratio_table_to_csv(const RatioTable& tbl);
std::string jackson_table_to_csv(const JacksonTable& tbl);
std::string bernstein_report_to_csv(const BernsteinReport& rep);

// Write via temp file + rename so readers never see partial output.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace wpa
