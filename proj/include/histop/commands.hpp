// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>

#include "histop/runconfig.hpp"

namespace histop {

struct BuiltOracle {
  std::unique_ptr<Oracle> oracle;
  std::shared_ptr<RveModel> model;  // kept alive for rve oracles
};

BuiltOracle make_oracle(const RunConfig& cfg);

// Test strain program selected by the config (program_file > parabolic > step).
StrainProgram make_test_program(const RunConfig& cfg);

void cmd_spectrum(const RunConfig& cfg, const std::string& out_dir);
void cmd_identify(const RunConfig& cfg, const std::string& out_dir);
void cmd_predict(const RunConfig& cfg, const std::string& model_path,
                 const std::string& out_dir);
void cmd_rve(const RunConfig& cfg, const std::string& out_dir);

}  // namespace histop
