// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "histop/errors.hpp"
#include "histop/numeric.hpp"

namespace histop {

OracleResponse Oracle::evaluate(const StrainProgram& program) {
  if (!(program.grid == grid()))
    throw std::invalid_argument("Oracle::evaluate: program grid does not match oracle grid");
  if (program.values.size() != program.grid.size())
    throw std::invalid_argument("Oracle::evaluate: program length does not match grid");
  OracleResponse out;
  out.stress = respond(program.values);
  out.oracle_id = id();
  out.evaluations = ++evaluations_;
  return out;
}

double Oracle::instantaneous_modulus() {
  if (auto m = known_modulus()) return *m;
  if (!measured_modulus_) {
    StrainProgram probe{grid(), Eigen::VectorXd::Ones(grid().size())};
    measured_modulus_ = evaluate(probe).stress(0);
  }
  return *measured_modulus_;
}

SlsOracle::SlsOracle(double C0, double C1, double lambda, TimeGrid grid)
    : C0_(C0), C1_(C1), lambda_(lambda), grid_(grid) {
  if (!(C0 > 0.0)) throw std::invalid_argument("SlsOracle: C0 must be positive");
  if (!(C1 >= 0.0)) throw std::invalid_argument("SlsOracle: C1 must be nonnegative");
  if (!(lambda > 0.0)) throw std::invalid_argument("SlsOracle: lambda must be positive");
}

Eigen::VectorXd SlsOracle::respond(const Eigen::VectorXd& eps) {
  const auto c = numeric::exp_step_coeffs(lambda_, grid_.dt());
  Eigen::VectorXd sigma(eps.size());
  double I = 0.0;
  sigma(0) = C0_ * eps(0);
  for (int i = 1; i < eps.size(); ++i) {
    I = c.decay * I + c.c_prev * eps(i - 1) + c.c_new * eps(i);
    sigma(i) = C0_ * eps(i) - C1_ * I;
  }
  return sigma;
}

PronyOracle::PronyOracle(PronyKernel kernel, TimeGrid grid)
    : kernel_(std::move(kernel)), grid_(grid) {
  for (const auto& b : kernel_.branches)
    if (!(b.mu > 0.0) || !(b.tau > 0.0))
      throw std::invalid_argument("PronyOracle: branch moduli and times must be positive");
}

std::optional<double> PronyOracle::known_modulus() const {
  return kernel_.instantaneous();
}

Eigen::VectorXd PronyOracle::respond(const Eigen::VectorXd& eps) {
  const double R0 = kernel_.instantaneous();
  const int nb = static_cast<int>(kernel_.branches.size());
  std::vector<numeric::ExpStepCoeffs> coeffs;
  std::vector<double> gain;  // mu_i / tau_i
  coeffs.reserve(nb);
  for (const auto& b : kernel_.branches) {
    coeffs.push_back(numeric::exp_step_coeffs(1.0 / b.tau, grid_.dt()));
    gain.push_back(b.mu / b.tau);
  }
  Eigen::VectorXd I = Eigen::VectorXd::Zero(nb);
  Eigen::VectorXd sigma(eps.size());
  sigma(0) = R0 * eps(0);
  for (int i = 1; i < eps.size(); ++i) {
    double hered = 0.0;
    for (int b = 0; b < nb; ++b) {
      I(b) = coeffs[b].decay * I(b) + coeffs[b].c_prev * eps(i - 1) + coeffs[b].c_new * eps(i);
      hered += gain[b] * I(b);
    }
    sigma(i) = R0 * eps(i) - hered;
  }
  return sigma;
}

HistorySample history_at(const StrainProgram& program, int i) {
  if (i < 0 || i >= program.grid.size())
    throw std::out_of_range("history_at: time index out of range");
  HistorySample h = HistorySample::Zero(program.grid.size());
  for (int j = 0; j <= i; ++j) h(j) = program.values(i - j);
  return h;
}

std::vector<HistorySample> sample_basis_responses(Oracle& oracle, const BasisSpec& b) {
  const TimeGrid& g = b.space.grid();
  if (!(g == oracle.grid()))
    throw std::invalid_argument("sample_basis_responses: basis grid does not match oracle");
  const double ceff = oracle.instantaneous_modulus();
  const int n = g.n;
  std::vector<HistorySample> out;
  out.reserve(b.size());
  for (int col = 0; col < b.size(); ++col) {
    const int j = b.signed_index(col);
    StrainProgram program{g, Eigen::VectorXd(g.size())};
    for (int i = 0; i <= n; ++i)
      program.values(i) = basis_eval(j, g.node(n - i), b);  // e_j(T - t)
    const Eigen::VectorXd sigma = oracle.evaluate(program).stress;
    HistorySample p(g.size());
    for (int i = 0; i <= n; ++i)
      p(i) = basis_eval(j, g.node(i), b) - sigma(n - i) / ceff;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace histop
