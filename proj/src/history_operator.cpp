// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/history_operator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "histop/errors.hpp"
#include "histop/numeric.hpp"

namespace histop {

HistorySample apply_S(const ScalarKernel& kernel, double elastic_modulus,
                      const HistorySample& f, const HistorySpace& sp) {
  const TimeGrid& g = sp.grid();
  if (f.size() != g.size())
    throw std::invalid_argument("apply_S: sample does not match grid");
  const double h = g.dt();
  HistorySample out(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const int c = g.n - i;
    double acc = 0.0;
    for (int j = i; j <= g.n; ++j)
      acc += segment_weight(j - i, c, h, sp.rule()) *
             kernel_eval(kernel, g.node(j) - g.node(i)) * f(j);
    out(i) = acc / elastic_modulus;
  }
  return out;
}

HistorySample apply_S_adjoint(const ScalarKernel& kernel, double elastic_modulus,
                              const HistorySample& f, const HistorySpace& sp) {
  const TimeGrid& g = sp.grid();
  if (f.size() != g.size())
    throw std::invalid_argument("apply_S_adjoint: sample does not match grid");
  const double h = g.dt();
  const WeightFn& w = sp.weight();
  HistorySample out(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double wi = w(g.node(i));
    double acc = 0.0;
    for (int j = 0; j <= i; ++j)
      acc += segment_weight(j, i, h, sp.rule()) *
             kernel_eval(kernel, g.node(i) - g.node(j)) * (w(g.node(j)) / wi) * f(j);
    out(i) = acc / elastic_modulus;
  }
  return out;
}

namespace {

// tan(kappa T) + kappa/alpha = 0 in the smooth form alpha sin + kappa cos = 0.
double char_fn(double kappa, double T, double alpha) {
  return alpha * std::sin(kappa * T) + kappa * std::cos(kappa * T);
}

double char_fn_deriv(double kappa, double T, double alpha) {
  return (alpha * T + 1.0) * std::cos(kappa * T) - kappa * T * std::sin(kappa * T);
}

double bracket_root(int n, double T, double alpha) {
  const double pi = std::numbers::pi;
  double lo, hi;
  if (alpha > 0.0) {
    lo = (n - 0.5) * pi / T;
    hi = n * pi / T;
  } else {
    lo = (n - 1.0) * pi / T;
    hi = (n - 0.5) * pi / T;
  }
  const double pad = 1e-9 * pi / T;
  lo += pad;
  hi -= pad;
  double flo = char_fn(lo, T, alpha);
  double fhi = char_fn(hi, T, alpha);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw numerics_error("sls_spectrum: bracketing failure for root " + std::to_string(n));
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = char_fn(mid, T, alpha);
    if (fm == 0.0) { lo = hi = mid; break; }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double kappa = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d = char_fn_deriv(kappa, T, alpha);
    if (d == 0.0) break;
    kappa -= char_fn(kappa, T, alpha) / d;
  }
  return kappa;
}

}  // namespace

SlsSpectrum sls_spectrum(const SlsParams& p, int n_max) {
  if (n_max < 1) throw std::invalid_argument("sls_spectrum: n_max must be >= 1");
  const double alpha = p.alpha();
  const double k = p.k();
  const double pi = std::numbers::pi;
  SlsSpectrum spec;
  spec.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    double kappa;
    if (std::abs(alpha) < 1e-12) {
      kappa = (n - 0.5) * pi / p.T;
    } else {
      kappa = bracket_root(n, p.T, alpha);
    }
    const double denom = alpha * alpha + kappa * kappa;
    spec.kappa.push_back(kappa);
    spec.mu.push_back(k * k / denom);
    spec.s.push_back(k / std::sqrt(denom));
    spec.norm.push_back(std::sqrt(2.0 / (p.T + alpha / denom)));
  }
  return spec;
}

std::pair<double, double> sls_eigenfunctions(const SlsSpectrum& spec,
                                             const SlsParams& p, int n, double tau) {
  if (n < 1 || n > spec.n_max)
    throw std::out_of_range("sls_eigenfunctions: index out of range");
  const double alpha = p.alpha();
  const double kappa = spec.kappa[n - 1];
  const double N = spec.norm[n - 1];
  const double ex = std::exp(0.5 * p.lambda0 * tau);
  const double phi = N * ex * std::sin(kappa * tau);
  const double psi = p.k() * N / (alpha * alpha + kappa * kappa) * ex *
                     (alpha * std::sin(kappa * tau) + kappa * std::cos(kappa * tau));
  return {phi, psi};
}

double sls_hs_norm(const SlsParams& p) {
  const double x = 2.0 * p.alpha() * p.T;
  return p.k() * p.T * std::sqrt(numeric::phi2m(x));
}

double relaxation_function(const std::function<HistorySample(const HistorySample&)>& apply,
                           double rho, const HistorySpace& sp) {
  const TimeGrid& g = sp.grid();
  if (rho < 0.0 || rho > g.T)
    throw std::invalid_argument("relaxation_function: rho outside [0, T]");
  // indicator of [0, rho]; a grid-aligned cut node carries the jump midpoint,
  // and rho = 0 has empty support
  const double tiny = 1e-12 * g.T;
  HistorySample h = HistorySample::Zero(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double tau = g.node(i);
    if (tau < rho - tiny)
      h(i) = 1.0;
    else if (std::abs(tau - rho) <= tiny && rho > tiny)
      h(i) = 0.5;
  }
  return apply(h)(0);
}

StepHistories step_exact(const SlsParams& p, const TimeGrid& grid) {
  StepHistories out;
  out.strain.resize(grid.size());
  out.inelastic.resize(grid.size());
  out.stress.resize(grid.size());
  const double half = 0.5 * p.T;
  for (int i = 0; i < grid.size(); ++i) {
    const double tau = grid.node(i);
    if (tau <= half) {
      const double decay = std::exp(-p.lambda * (half - tau));
      out.strain(i) = 1.0;
      out.inelastic(i) = p.C1 / (p.C0 * p.lambda) * (1.0 - decay);
      out.stress(i) = p.C0 + p.C1 / p.lambda * (decay - 1.0);
    } else {
      out.strain(i) = 0.0;
      out.inelastic(i) = 0.0;
      out.stress(i) = 0.0;
    }
  }
  return out;
}

}  // namespace histop
