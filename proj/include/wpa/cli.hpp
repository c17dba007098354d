#pragma once

// Run configuration shared by the command-line tool and in-process callers.
// run() dispatches to the library and writes reports; exit code 0 = pass,
// 2 = verdict fail. Errors are thrown (the CLI maps them to exit code 1).

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpa/weights.hpp"

namespace wpa {

struct RunConfig {
  std::string command;  // weight-check | mrs | basis | approx | modulus | verify | monotone
  WeightSpec spec = WeightSpec::freud(2.0, 1.0);

  // verify
  std::string theorem;  // 2.3 | 2.4 | 2.5 | 3.6 | 3.7 | 3.9 | 4.1 | jackson
  std::string f_expr = "sin(x)";
  int r = 2;
  int variant = 1;  // for 2.4
  double p = std::numeric_limits<double>::infinity();
  double beta = 1.5;
  std::vector<int> n_list;
  std::string precision = "auto";  // auto | double | quad
  std::uint64_t seed = 12345;
  int k = 1;  // jackson / bernstein derivative order

  // approx / basis
  int n = 8;
  int nmax = 16;

  // modulus
  double t = 0.5;

  // monotone
  std::string op_expr = "d1";
  double delta = 0.5;
  double M = 2.0;
  int n_max = 24;

  // mrs
  std::vector<double> x_list;

  // weight-check
  double lambda = 1.1;

  // output
  std::string out;             // empty = stdout only
  std::string format = "csv";  // csv | json

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

int run(const RunConfig& cfg, std::string* stdout_capture = nullptr);

}  // namespace wpa
