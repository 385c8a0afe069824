// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "histop/errors.hpp"

namespace histop {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw config_error("config: " + path + ": " + why);
}

const json& member(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double number_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, const std::string& path,
                 double fallback) {
  if (!j.contains(key)) return fallback;
  return number_at(j, key, path);
}

int int_at(const json& j, const std::string& key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

int int_or(const json& j, const std::string& key, const std::string& path, int fallback) {
  if (!j.contains(key)) return fallback;
  return int_at(j, key, path);
}

bool bool_or(const json& j, const std::string& key, const std::string& path, bool fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string string_or(const json& j, const std::string& key, const std::string& path,
                      const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<int> int_list_or(const json& j, const std::string& key, const std::string& path,
                             std::vector<int> fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array()) fail(path + "." + key, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(path + "." + key, "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

GammaSpec gamma_or(const json& j, const std::string& key, const std::string& path,
                   GammaSpec fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  const std::string p = path + "." + key;
  GammaSpec g;
  g.mean = number_at(v, "mean", p);
  g.shape = number_at(v, "shape", p);
  if (!(g.mean > 0.0) || !(g.shape > 0.0)) fail(p, "mean and shape must be positive");
  return g;
}

void parse_oracle(const json& j, OracleConfig& oc) {
  oc.type = string_or(j, "type", "oracle", "");
  if (oc.type.empty()) fail("oracle.type", "missing field");
  if (oc.type == "sls") {
    oc.sls.C0 = number_at(j, "C0", "oracle");
    oc.sls.C1 = number_at(j, "C1", "oracle");
    oc.sls.lambda = number_at(j, "lambda", "oracle");
    if (!(oc.sls.C0 > 0.0)) fail("oracle.C0", "must be positive");
    if (!(oc.sls.C1 >= 0.0)) fail("oracle.C1", "must be nonnegative");
    if (!(oc.sls.lambda > 0.0)) fail("oracle.lambda", "must be positive");
  } else if (oc.type == "prony") {
    oc.prony.mu_inf = number_at(j, "mu_inf", "oracle");
    const json& branches = member(j, "branches", "oracle");
    if (!branches.is_array() || branches.empty())
      fail("oracle.branches", "expected a non-empty array");
    for (size_t b = 0; b < branches.size(); ++b) {
      const std::string p = "oracle.branches[" + std::to_string(b) + "]";
      PronyBranch br;
      br.mu = number_at(branches[b], "mu", p);
      br.tau = number_at(branches[b], "tau", p);
      if (!(br.mu > 0.0) || !(br.tau > 0.0)) fail(p, "mu and tau must be positive");
      oc.prony.branches.push_back(br);
    }
  } else if (oc.type == "rve") {
    auto& r = oc.rve;
    r.grains_per_side = int_or(j, "grains_per_side", "oracle", r.grains_per_side);
    r.elems_per_grain_side = int_or(j, "elems_per_grain_side", "oracle", r.elems_per_grain_side);
    if (r.grains_per_side < 1) fail("oracle.grains_per_side", "must be >= 1");
    if (r.elems_per_grain_side < 1) fail("oracle.elems_per_grain_side", "must be >= 1");
    if (j.contains("seed")) {
      r.seed_set = true;
      r.seed = j.at("seed").get<std::uint64_t>();
    }
    r.gamma_visc = gamma_or(j, "gamma_visc", "oracle", r.gamma_visc);
    r.gamma_tau = gamma_or(j, "gamma_tau", "oracle", r.gamma_tau);
    r.branches = int_or(j, "branches", "oracle", r.branches);
    if (r.branches < 1) fail("oracle.branches", "must be >= 1");
    r.mu_inf = number_or(j, "mu_inf", "oracle", r.mu_inf);
    r.kappa = number_or(j, "kappa", "oracle", r.kappa);
    if (!(r.kappa > 0.0)) fail("oracle.kappa", "must be positive");
    r.mesh_file = string_or(j, "mesh_file", "oracle", "");
    if (!r.mesh_file.empty() && !std::filesystem::exists(r.mesh_file))
      fail("oracle.mesh_file", "file does not exist: " + r.mesh_file);
    r.response_js = int_list_or(j, "response_js", "oracle", r.response_js);
  } else {
    fail("oracle.type", "must be one of sls | prony | rve");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config: not valid JSON: ") + e.what());
  }
  RunConfig cfg;

  if (j.contains("space")) {
    const json& s = j.at("space");
    cfg.space.T = number_or(s, "T", "space", cfg.space.T);
    cfg.space.n = int_or(s, "n", "space", cfg.space.n);
    cfg.space.lambda0 = number_or(s, "lambda0", "space", cfg.space.lambda0);
    cfg.space.rule = quad_rule_from_string(string_or(s, "quadrature", "space", "simpson"));
    if (!(cfg.space.T > 0.0)) fail("space.T", "must be positive");
    if (cfg.space.n < 2) fail("space.n", "must be >= 2");
    if (!(cfg.space.lambda0 >= 0.0)) fail("space.lambda0", "must be nonnegative");
  }
  if (j.contains("basis")) {
    cfg.m = int_or(j.at("basis"), "m", "basis", cfg.m);
    if (cfg.m < 0) fail("basis.m", "must be >= 0");
  }
  if (j.contains("oracle")) parse_oracle(j.at("oracle"), cfg.oracle);
  if (j.contains("reduction")) {
    const json& r = j.at("reduction");
    cfg.reduction.N = int_or(r, "N", "reduction", 0);
    cfg.reduction.N_list = int_list_or(r, "N_list", "reduction", {});
    cfg.reduction.fourier_baseline = bool_or(r, "fourier_baseline", "reduction", true);
    cfg.reduction.closed_form = bool_or(r, "closed_form", "reduction", false);
    const int M = 2 * cfg.m + 1;
    if (cfg.reduction.N < 0 || cfg.reduction.N > M)
      fail("reduction.N", "must satisfy 1 <= N <= 2m+1");
    for (int N : cfg.reduction.N_list)
      if (N < 1) fail("reduction.N_list", "entries must be >= 1");
    if (cfg.reduction.closed_form && cfg.oracle.type != "sls")
      fail("reduction.closed_form", "closed-form assembly requires the sls oracle");
  }
  if (j.contains("tests")) {
    const json& t = j.at("tests");
    cfg.tests.step = bool_or(t, "step", "tests", cfg.tests.step);
    cfg.tests.parabolic = bool_or(t, "parabolic", "tests", cfg.tests.parabolic);
    cfg.tests.literal_parabola =
        bool_or(t, "literal_parabola", "tests", cfg.tests.literal_parabola);
    cfg.tests.program_file = string_or(t, "program_file", "tests", "");
    if (!cfg.tests.program_file.empty() &&
        !std::filesystem::exists(cfg.tests.program_file))
      fail("tests.program_file", "file does not exist: " + cfg.tests.program_file);
  }
  if (j.contains("spectrum")) {
    const json& s = j.at("spectrum");
    cfg.M_sweep = int_list_or(s, "M_sweep", "spectrum", cfg.M_sweep);
    cfg.k_max = int_or(s, "k_max", "spectrum", cfg.k_max);
    for (int M : cfg.M_sweep)
      if (M < 1 || M % 2 == 0) fail("spectrum.M_sweep", "entries must be odd and >= 1");
    if (cfg.k_max < 1) fail("spectrum.k_max", "must be >= 1");
  }
  cfg.output_dir = string_or(j, "output_dir", "", "out");
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.echo = j.dump(2);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

void apply_paper_scale(RunConfig& cfg) {
  cfg.oracle.rve.grains_per_side = 4;
  cfg.oracle.rve.elems_per_grain_side = 2;
  cfg.m = 20;
  cfg.space.T = 5.0;
}

}  // namespace histop
