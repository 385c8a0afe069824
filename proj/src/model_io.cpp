// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "histop/errors.hpp"

namespace histop {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, int rows, int cols,
                                 const std::string& name) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw config_error("model file: field '" + name + "' has wrong shape");
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw config_error("model file: field '" + name + "' has wrong shape");
    for (int c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
  }
  return M;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

void save_model(const ReducedModel& rm, const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["T"] = rm.T;
  j["lambda0"] = rm.lambda0;
  j["m"] = rm.m;
  j["M"] = rm.M;
  j["N"] = rm.N;
  j["C_eff"] = rm.C_eff;
  j["basis"] = "trig-exp";
  j["sign_convention"] = "ep=eps-sigma/C";
  j["kind"] = rm.kind;
  nlohmann::json s = nlohmann::json::array();
  for (int k = 0; k < rm.s.size(); ++k) s.push_back(rm.s(k));
  j["s"] = std::move(s);
  nlohmann::json psi0 = nlohmann::json::array();
  for (int k = 0; k < rm.psi0.size(); ++k) psi0.push_back(rm.psi0(k));
  j["psi0"] = std::move(psi0);
  j["Phi"] = matrix_to_json(rm.Phi);
  j["Psi"] = matrix_to_json(rm.Psi);
  write_text_atomic(path, j.dump(2) + "\n");
}

ReducedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open model file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("model file '" + path + "': " + e.what());
  }
  ReducedModel rm;
  try {
    if (j.at("version").get<int>() != 1)
      throw config_error("model file '" + path + "': unsupported version");
    if (j.at("basis").get<std::string>() != "trig-exp")
      throw config_error("model file '" + path + "': unknown basis");
    rm.T = j.at("T").get<double>();
    rm.lambda0 = j.at("lambda0").get<double>();
    rm.m = j.at("m").get<int>();
    rm.M = j.at("M").get<int>();
    rm.N = j.at("N").get<int>();
    rm.C_eff = j.at("C_eff").get<double>();
    rm.kind = j.at("kind").get<std::string>();
    const auto& s = j.at("s");
    rm.s.resize(s.size());
    for (size_t k = 0; k < s.size(); ++k) rm.s(k) = s[k].get<double>();
    const auto& psi0 = j.at("psi0");
    rm.psi0.resize(psi0.size());
    for (size_t k = 0; k < psi0.size(); ++k) rm.psi0(k) = psi0[k].get<double>();
    rm.Phi = matrix_from_json(j.at("Phi"), rm.M, rm.N, "Phi");
    rm.Psi = matrix_from_json(j.at("Psi"), rm.M, rm.N, "Psi");
  } catch (const nlohmann::json::exception& e) {
    throw config_error("model file '" + path + "': " + e.what());
  }
  if (rm.M != 2 * rm.m + 1)
    throw config_error("model file '" + path + "': M must equal 2m+1");
  if (rm.N < 1 || rm.N > rm.M || rm.s.size() != rm.N || rm.psi0.size() != rm.N)
    throw config_error("model file '" + path + "': inconsistent N");
  return rm;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    out += header[i];
    out += (i + 1 < header.size()) ? ',' : '\n';
  }
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (std::holds_alternative<long long>(row[i]))
        out += std::to_string(std::get<long long>(row[i]));
      else if (std::holds_alternative<double>(row[i]))
        out += format_double(std::get<double>(row[i]));
      else
        out += std::get<std::string>(row[i]);
      out += (i + 1 < row.size()) ? ',' : '\n';
    }
  }
  write_text_atomic(path, out);
}

}  // namespace histop
