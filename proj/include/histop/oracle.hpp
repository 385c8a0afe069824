// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "histop/hist.hpp"
#include "histop/history_operator.hpp"
#include "histop/kernels.hpp"

namespace histop {

// Strain evolution eps(t) prescribed at the nodes of a uniform grid in
// physical time t (eps = 0 for t < 0); piecewise linear between nodes.
struct StrainProgram {
  TimeGrid grid;
  Eigen::VectorXd values;
};

struct OracleResponse {
  Eigen::VectorXd stress;
  std::string oracle_id;
  long evaluations = 0;
};

// Black-box linear viscoelastic material: strain evolution in, stress
// evolution out.  The identification pipeline sees only this interface.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual const TimeGrid& grid() const = 0;
  virtual std::string id() const = 0;

  OracleResponse evaluate(const StrainProgram& program);

  // Instantaneous modulus: known analytically or measured by a unit step
  // probe reading sigma(0+) (one extra evaluation).
  double instantaneous_modulus();

  long evaluations() const { return evaluations_; }

 protected:
  virtual Eigen::VectorXd respond(const Eigen::VectorXd& strain) = 0;
  virtual std::optional<double> known_modulus() const { return std::nullopt; }

 private:
  long evaluations_ = 0;
  std::optional<double> measured_modulus_;
};

// Exact exponential recursion for the SLS convolution; exact for piecewise-
// linear strain programs.
class SlsOracle : public Oracle {
 public:
  SlsOracle(double C0, double C1, double lambda, TimeGrid grid);
  const TimeGrid& grid() const override { return grid_; }
  std::string id() const override { return "sls"; }

 protected:
  Eigen::VectorXd respond(const Eigen::VectorXd& strain) override;
  std::optional<double> known_modulus() const override { return C0_; }

 private:
  double C0_, C1_, lambda_;
  TimeGrid grid_;
};

// One exponential recursion per Prony branch; sigma = R(0) eps - sum branches.
class PronyOracle : public Oracle {
 public:
  PronyOracle(PronyKernel kernel, TimeGrid grid);
  const TimeGrid& grid() const override { return grid_; }
  std::string id() const override { return "prony"; }

 protected:
  Eigen::VectorXd respond(const Eigen::VectorXd& strain) override;
  std::optional<double> known_modulus() const override;

 private:
  PronyKernel kernel_;
  TimeGrid grid_;
};

// History of the program at time index i: eps_{t_i}(tau_j) = eps(t_i - tau_j),
// zero-padded before the start of the program.  All frame conversion between
// physical time and history time happens here (tau = t_i - t).
HistorySample history_at(const StrainProgram& program, int i);

// Basis interrogation: for each signed index j impose eps(t) = e_j(T - t),
// read sigma(t), and convert to the inelastic-strain history
// p_j(tau) = e_j(tau) - sigma(T - tau)/C_eff.
std::vector<HistorySample> sample_basis_responses(Oracle& oracle, const BasisSpec& b);

}  // namespace histop
