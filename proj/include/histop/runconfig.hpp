// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "histop/hist.hpp"
#include "histop/kernels.hpp"
#include "histop/rve.hpp"

namespace histop {

struct SpaceConfig {
  double T = 1.0;
  int n = 2000;
  double lambda0 = 1.0;
  QuadRule rule = QuadRule::simpson;
};

struct SlsOracleConfig {
  double C0 = 2.0;
  double C1 = 1.0;
  double lambda = 1.0;
};

struct RveOracleConfig {
  int grains_per_side = 2;
  int elems_per_grain_side = 2;
  bool seed_set = false;
  std::uint64_t seed = 0;  // defaults to the run seed
  GammaSpec gamma_visc{2.0, 2.0};
  GammaSpec gamma_tau{1.0, 2.0};
  int branches = 3;
  double mu_inf = 1.0;
  double kappa = 5.0 / 3.0;
  std::string mesh_file;
  std::vector<int> response_js{-2, -1, 0, 1, 2};
};

struct OracleConfig {
  std::string type;  // "sls" | "prony" | "rve" | "" (none)
  SlsOracleConfig sls;
  PronyKernel prony;
  RveOracleConfig rve;
};

struct ReductionConfig {
  int N = 0;  // 0 = full rank M
  std::vector<int> N_list;
  bool fourier_baseline = true;
  bool closed_form = false;  // use the analytic SLS assembly
};

struct TestsConfig {
  bool step = true;
  bool parabolic = false;
  bool literal_parabola = false;  // eps_xy(t) = 4/25 t (1 - t) as printed
  std::string program_file;
};

struct RunConfig {
  SpaceConfig space;
  int m = 15;
  OracleConfig oracle;
  ReductionConfig reduction;
  TestsConfig tests;
  std::vector<int> M_sweep{5, 11, 21, 31, 41, 63};
  int k_max = 6;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::string echo;  // canonical echo of the parsed document
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Paper-scale overrides for the polycrystal experiment: 4^3 grains,
// 2 elements per grain side, m = 20 (M = 41), T = 5.
void apply_paper_scale(RunConfig& cfg);

}  // namespace histop
