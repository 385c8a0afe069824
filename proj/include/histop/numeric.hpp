// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace histop::numeric {

// (1 - e^{-x}) / x, stable near 0.
inline double phi1m(double x) {
  if (std::abs(x) < 0.5) {
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 20; ++k) {
      sum += term / static_cast<double>(k + 1);
      term *= -x / static_cast<double>(k + 1);
      if (std::abs(term) < 1e-20) break;
    }
    return sum;
  }
  return -std::expm1(-x) / x;
}

// (e^{-x} - 1 + x) / x^2, stable near 0.  Limit 1/2 at x = 0.
inline double phi2m(double x) {
  if (std::abs(x) < 0.5) {
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 20; ++k) {
      sum += term / static_cast<double>((k + 1) * (k + 2));
      term *= -x / static_cast<double>(k + 1);
      if (std::abs(term) < 1e-20) break;
    }
    return sum;
  }
  return (std::expm1(-x) + x) / (x * x);
}

// (1 - (1 + x) e^{-x}) / x^2, stable near 0.  Limit 1/2 at x = 0.
inline double psi2m(double x) {
  if (std::abs(x) < 0.5) {
    // sum_k (-x)^k / (k! (k+2))
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 20; ++k) {
      sum += term / static_cast<double>(k + 2);
      term *= -x / static_cast<double>(k + 1);
      if (std::abs(term) < 1e-20) break;
    }
    return sum;
  }
  return (1.0 - (1.0 + x) * std::exp(-x)) / (x * x);
}

// Update coefficients for the hereditary integral
//   I(t) = \int_0^t e^{-lambda (t-s)} eps(s) ds
// advanced one uniform step with eps linear on the step:
//   I_{i+1} = decay * I_i + c_prev * eps_i + c_new * eps_{i+1}.
// Exact for piecewise-linear eps.
struct ExpStepCoeffs {
  double decay;
  double c_prev;
  double c_new;
};

inline ExpStepCoeffs exp_step_coeffs(double lambda, double dt) {
  const double x = lambda * dt;
  const double a = dt * phi1m(x);   // \int_0^dt e^{-lambda u} du
  const double c = dt * psi2m(x);   // weight of the old endpoint
  return {std::exp(-x), c, a - c};
}

// Uniform double in (0, 1), 53-bit, engine-deterministic.
inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller (no rejection, engine-deterministic).
inline double normal01(std::mt19937_64& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

}  // namespace histop::numeric
