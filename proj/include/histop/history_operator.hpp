// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "histop/hist.hpp"
#include "histop/kernels.hpp"

namespace histop {

// Standard linear solid sigma(t) = C0 eps(t) - int_0^t C1 e^{-lambda(t-s)} eps(s) ds.
// The inelastic-strain operator acts with kernel amplitude k = C1/C0.
struct SlsParams {
  double C0 = 2.0;
  double C1 = 1.0;
  double lambda = 1.0;
  double lambda0 = 1.0;
  double T = 1.0;

  double k() const { return C1 / C0; }
  double alpha() const { return lambda - 0.5 * lambda0; }
  double a() const { return lambda + 0.5 * lambda0; }
};

// Eigen-structure of S*S for the SLS operator: roots kappa_n of
// tan(kappa T) + kappa/alpha = 0, eigenvalues mu_n = k^2/(alpha^2+kappa_n^2),
// singular values s_n and normalizations N_n of phi_n.
struct SlsSpectrum {
  std::vector<double> kappa, mu, s, norm;
  int n_max = 0;
};

// (S f)(tau_i) = int_{tau_i}^T K(rho - tau_i)/C f(rho) drho by nodal quadrature.
HistorySample apply_S(const ScalarKernel& kernel, double elastic_modulus,
                      const HistorySample& f, const HistorySpace& sp);

// (S* f)(tau_i) = int_0^{tau_i} K(tau_i - rho)/C f(rho) w(rho)/w(tau_i) drho.
HistorySample apply_S_adjoint(const ScalarKernel& kernel, double elastic_modulus,
                              const HistorySample& f, const HistorySpace& sp);

SlsSpectrum sls_spectrum(const SlsParams& p, int n_max);

// Returns (phi_n(tau), psi_n(tau)), n = 1..n_max.
std::pair<double, double> sls_eigenfunctions(const SlsSpectrum& spec,
                                             const SlsParams& p, int n, double tau);

// Closed-form Hilbert-Schmidt norm k T sqrt((e^{-x} - 1 + x)/x^2), x = 2 alpha T
// with alpha = lambda - lambda0/2 (decay rate of the unitarily equivalent kernel).
double sls_hs_norm(const SlsParams& p);

// Evaluates an operator closure on the indicator history h_rho (1 for tau <= rho)
// and returns the value at tau = 0.
double relaxation_function(const std::function<HistorySample(const HistorySample&)>& apply,
                           double rho, const HistorySpace& sp);

// Exact unit-step histories at t = T: eps^p and sigma for the SLS.
struct StepHistories {
  HistorySample strain;     // the step history itself
  HistorySample inelastic;  // eps^p = eps - sigma/C0
  HistorySample stress;
};

StepHistories step_exact(const SlsParams& p, const TimeGrid& grid);

}  // namespace histop
