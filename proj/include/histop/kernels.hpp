// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "histop/hist.hpp"

namespace histop {

// K(tau) = k e^{-lambda tau} for tau >= 0, zero for tau < 0 (causality).
struct ExpKernel {
  double k = 1.0;
  double lambda = 1.0;
};

struct PronyBranch {
  double mu = 1.0;   // branch modulus
  double tau = 1.0;  // relaxation time
};

// Relaxation modulus R(tau) = mu_inf + sum mu_i e^{-tau/tau_i}.  The induced
// hereditary kernel is K(tau) = -R'(tau) = sum (mu_i/tau_i) e^{-tau/tau_i}.
struct PronyKernel {
  double mu_inf = 0.0;
  std::vector<PronyBranch> branches;

  double instantaneous() const;            // R(0)
  double relaxation(double tau) const;     // R(tau)
};

struct SpectrumAtom {
  double lambda = 1.0;  // inverse relaxation time, > lambda0
  double nu = 0.0;      // measure weight, >= 0
};

// Discrete relaxation measure; K(tau) = sum (lambda_i - lambda0) nu_i e^{-lambda_i tau}.
struct DiscreteSpectrum {
  double lambda0 = 0.0;
  std::vector<SpectrumAtom> atoms;
};

using ScalarKernel = std::variant<ExpKernel, PronyKernel, DiscreteSpectrum>;

double kernel_eval(const ScalarKernel& kernel, double tau);

struct HsBound {
  double value = 0.0;   // gamma sqrt(T)
  bool diverged = false;
};

// gamma^2 = int_0^T K(tau)^2 / w(tau) dtau by Simpson quadrature; the bound is
// gamma sqrt(T).  Grid sensitivity (Richardson ratio > 1.5 between n and 2n
// points) raises the diverged flag.
HsBound hs_bound(const ScalarKernel& kernel, const WeightFn& w, double T);

using Mandel6 = Eigen::Matrix<double, 6, 6>;

// Orthonormal (Mandel) 6-vector convention: (11, 22, 33, sqrt2*23, sqrt2*13,
// sqrt2*12); tensor norms and inner products are plain Euclidean.
Mandel6 mandel_volumetric();  // J: eigenvalue 1 on the hydrostatic axis
Mandel6 mandel_deviatoric();  // I - J

// Isotropic moduli C = 3 kappa J + 2 mu (I - J); eigenvalues {3k x1, 2mu x5}.
struct IsotropicModuli {
  double kappa = 1.0;
  double mu = 1.0;
  Mandel6 matrix() const;
};

IsotropicModuli isotropic(double kappa, double mu);

}  // namespace histop
