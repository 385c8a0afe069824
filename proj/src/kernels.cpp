// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace histop {

double PronyKernel::instantaneous() const {
  double r = mu_inf;
  for (const auto& b : branches) r += b.mu;
  return r;
}

double PronyKernel::relaxation(double tau) const {
  double r = mu_inf;
  for (const auto& b : branches) r += b.mu * std::exp(-tau / b.tau);
  return r;
}

double kernel_eval(const ScalarKernel& kernel, double tau) {
  if (tau < 0.0) return 0.0;
  return std::visit(
      [tau](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ExpKernel>) {
          return k.k * std::exp(-k.lambda * tau);
        } else if constexpr (std::is_same_v<T, PronyKernel>) {
          double v = 0.0;
          for (const auto& b : k.branches) v += b.mu / b.tau * std::exp(-tau / b.tau);
          return v;
        } else {
          double v = 0.0;
          for (const auto& a : k.atoms)
            v += (a.lambda - k.lambda0) * a.nu * std::exp(-a.lambda * tau);
          return v;
        }
      },
      kernel);
}

namespace {

double gamma_squared(const ScalarKernel& kernel, const WeightFn& w, double T, int n) {
  Eigen::VectorXd weights = segment_weights(n, T / n, QuadRule::simpson);
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double tau = T * static_cast<double>(i) / n;
    const double K = kernel_eval(kernel, tau);
    acc += weights(i) * K * K / w(tau);
  }
  return acc;
}

}  // namespace

HsBound hs_bound(const ScalarKernel& kernel, const WeightFn& w, double T) {
  const int n = 2000;
  TimeGrid grid(T, n);
  if (!check_admissible(w, TimeGrid(T, 200)))
    throw std::invalid_argument("hs_bound: weight is not admissible");
  const double g1 = gamma_squared(kernel, w, T, n);
  const double g2 = gamma_squared(kernel, w, T, 2 * n);
  HsBound out;
  out.diverged = !std::isfinite(g2) || (g1 > 0.0 && g2 > 1.5 * g1);
  out.value = std::sqrt(std::max(0.0, g2)) * std::sqrt(T);
  if (out.diverged) out.value = std::numeric_limits<double>::infinity();
  return out;
}

Mandel6 mandel_volumetric() {
  Mandel6 J = Mandel6::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) J(i, j) = 1.0 / 3.0;
  return J;
}

Mandel6 mandel_deviatoric() { return Mandel6::Identity() - mandel_volumetric(); }

Mandel6 IsotropicModuli::matrix() const {
  return 3.0 * kappa * mandel_volumetric() + 2.0 * mu * mandel_deviatoric();
}

IsotropicModuli isotropic(double kappa, double mu) {
  if (!(kappa > 0.0)) throw std::invalid_argument("isotropic: kappa must be positive");
  if (!(mu >= 0.0)) throw std::invalid_argument("isotropic: mu must be nonnegative");
  return {kappa, mu};
}

}  // namespace histop
