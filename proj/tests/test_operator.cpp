// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "histop/errors.hpp"
#include "histop/history_operator.hpp"
#include "histop/numeric.hpp"

using namespace histop;

namespace {

HistorySpace make_space(double T, int n, double lambda0) {
  return HistorySpace(TimeGrid(T, n), WeightFn{lambda0});
}

// independent root oracle: plain bisection on tan(kappa T) + kappa/alpha
double bisect_tan_root(double lo, double hi, double T, double alpha) {
  auto g = [&](double k) { return std::tan(k * T) + k / alpha; };
  double flo = g(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = g(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

HistorySample random_poly(const TimeGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  double c[6];
  for (double& x : c) x = coeff(rng);
  HistorySample f(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double t = g.node(i) / g.T;
    f(i) = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
  }
  return f;
}

}  // namespace

TEST_CASE("apply_S basics") {
  HistorySpace sp = make_space(1.0, 2000, 1.0);
  const ScalarKernel k = ExpKernel{0.5, 1.0};
  SUBCASE("zero in, zero out") {
    const HistorySample out = apply_S(k, 1.0, HistorySample::Zero(sp.grid().size()), sp);
    CHECK(out.norm() == 0.0);
  }
  SUBCASE("step history value at the present") {
    // oracle: (S 1_{[0,1/2]})(0) = int_0^{1/2} 0.5 e^{-rho} drho = 0.5 (1 - e^{-1/2})
    HistorySample f(sp.grid().size());
    for (int i = 0; i < sp.grid().size(); ++i)
      f(i) = sp.grid().node(i) <= 0.5 ? 1.0 : 0.0;
    const HistorySample out = apply_S(k, 1.0, f, sp);
    CHECK(out(0) == doctest::Approx(0.5 * (1.0 - std::exp(-0.5))).epsilon(2e-3));
  }
  SUBCASE("linearity holds exactly at the quadrature level") {
    std::mt19937_64 rng(11);
    const HistorySample f = random_poly(sp.grid(), rng);
    const HistorySample g = random_poly(sp.grid(), rng);
    const HistorySample lhs = apply_S(k, 1.0, 2.0 * f + 3.0 * g, sp);
    const HistorySample rhs = 2.0 * apply_S(k, 1.0, f, sp) + 3.0 * apply_S(k, 1.0, g, sp);
    CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-13);
  }
}

TEST_CASE("adjoint operator") {
  HistorySpace sp = make_space(1.0, 2000, 1.0);
  SUBCASE("zero in, zero out") {
    const HistorySample out = apply_S_adjoint(ExpKernel{1.0, 1.0}, 1.0,
                                              HistorySample::Zero(sp.grid().size()), sp);
    CHECK(out.norm() == 0.0);
  }
  SUBCASE("lambda = lambda0 makes S* of a constant the ramp tau") {
    // (S* 1)(tau) = int_0^tau k e^{-(lambda-lambda0)(tau-rho)} drho = tau
    const HistorySample out = apply_S_adjoint(ExpKernel{1.0, 1.0}, 1.0,
                                              HistorySample::Ones(sp.grid().size()), sp);
    for (int i = 0; i < sp.grid().size(); i += 250)
      CHECK(out(i) == doctest::Approx(sp.grid().node(i)).epsilon(1e-10));
  }
  SUBCASE("adjoint identity on random smooth pairs") {
    const ScalarKernel k = ExpKernel{0.5, 1.0};
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const HistorySample f = random_poly(sp.grid(), rng);
      const HistorySample g = random_poly(sp.grid(), rng);
      const double lhs = inner_product(apply_S(k, 1.0, f, sp), g, sp);
      const double rhs = inner_product(f, apply_S_adjoint(k, 1.0, g, sp), sp);
      CHECK(std::abs(lhs - rhs) <= 1e-7);
    }
  }
}

TEST_CASE("SLS spectrum, alpha = 0 closed form") {
  // lambda = lambda0/2; s_n = k T / ((n - 1/2) pi)
  SlsParams p{1.0, 1.0, 0.5, 1.0, 1.0};
  REQUIRE(p.alpha() == doctest::Approx(0.0));
  const SlsSpectrum spec = sls_spectrum(p, 4);
  const double pi = std::numbers::pi;
  CHECK(spec.s[0] == doctest::Approx(2.0 / pi).epsilon(1e-14));
  CHECK(spec.s[1] == doctest::Approx(2.0 / (3.0 * pi)).epsilon(1e-14));
  for (int n = 1; n <= 4; ++n)
    CHECK(spec.kappa[n - 1] == doctest::Approx((n - 0.5) * pi).epsilon(1e-14));
}

TEST_CASE("SLS spectrum, transcendental branch") {
  SlsParams p{2.0, 1.0, 1.0, 1.0, 1.0};  // alpha = 0.5, k = 0.5
  const SlsSpectrum spec = sls_spectrum(p, 10);
  const double pi = std::numbers::pi;
  SUBCASE("roots match the independent bisection oracle") {
    const double k1 = bisect_tan_root(0.5 * pi + 1e-9, pi - 1e-9, 1.0, 0.5);
    CHECK(spec.kappa[0] == doctest::Approx(k1).epsilon(1e-10));
    CHECK(spec.s[0] ==
          doctest::Approx(0.5 / std::sqrt(0.25 + k1 * k1)).epsilon(1e-10));
  }
  SUBCASE("residuals of tan(kappa T) + kappa/alpha") {
    for (int n = 1; n <= 10; ++n) {
      const double r = std::tan(spec.kappa[n - 1] * p.T) + spec.kappa[n - 1] / p.alpha();
      CHECK(std::abs(r) <= 1e-10);
    }
  }
  SUBCASE("ordering and positivity") {
    for (int n = 1; n < 10; ++n) {
      CHECK(spec.kappa[n] > spec.kappa[n - 1]);
      CHECK(spec.s[n] < spec.s[n - 1]);
      CHECK(spec.s[n] > 0.0);
    }
  }
  SUBCASE("negative alpha brackets hold") {
    SlsParams pneg{1.0, 1.0, 0.3, 1.0, 1.0};  // alpha = -0.2, |alpha| T < 1
    const SlsSpectrum sneg = sls_spectrum(pneg, 5);
    for (int n = 1; n <= 5; ++n) {
      const double r =
          std::tan(sneg.kappa[n - 1] * pneg.T) + sneg.kappa[n - 1] / pneg.alpha();
      CHECK(std::abs(r) <= 1e-10);
    }
  }
}

TEST_CASE("zero kernel amplitude zeroes all singular values") {
  SlsParams p{1.0, 0.0, 1.0, 1.0, 1.0};
  const SlsSpectrum spec = sls_spectrum(p, 3);
  for (double s : spec.s) CHECK(s == 0.0);
}

TEST_CASE("SLS eigenfunctions") {
  SlsParams p{2.0, 1.0, 1.0, 1.0, 1.0};
  const SlsSpectrum spec = sls_spectrum(p, 6);
  HistorySpace sp = make_space(1.0, 2000, 1.0);
  SUBCASE("phi_n(0) = 0") {
    for (int n = 1; n <= 6; ++n)
      CHECK(sls_eigenfunctions(spec, p, n, 0.0).first == doctest::Approx(0.0));
  }
  SUBCASE("unit H-norm of phi_n") {
    for (int n = 1; n <= 6; ++n) {
      HistorySample phi(sp.grid().size());
      for (int i = 0; i < sp.grid().size(); ++i)
        phi(i) = sls_eigenfunctions(spec, p, n, sp.grid().node(i)).first;
      CHECK(norm_h(phi, sp) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  SUBCASE("psi_n has norm s_n and equals S phi_n") {
    const ScalarKernel kern = ExpKernel{p.C1, p.lambda};
    for (int n = 1; n <= 6; ++n) {
      HistorySample phi(sp.grid().size()), psi(sp.grid().size());
      for (int i = 0; i < sp.grid().size(); ++i) {
        const auto [ph, ps] = sls_eigenfunctions(spec, p, n, sp.grid().node(i));
        phi(i) = ph;
        psi(i) = ps;
      }
      CHECK(norm_h(psi, sp) == doctest::Approx(spec.s[n - 1]).epsilon(1e-8));
      const HistorySample sphi = apply_S(kern, p.C0, phi, sp);
      CHECK((sphi - psi).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
  }
  SUBCASE("left singular functions are mutually orthogonal") {
    std::vector<HistorySample> psis;
    for (int n = 1; n <= 4; ++n) {
      HistorySample psi(sp.grid().size());
      for (int i = 0; i < sp.grid().size(); ++i)
        psi(i) = sls_eigenfunctions(spec, p, n, sp.grid().node(i)).second;
      psis.push_back(psi);
    }
    for (size_t a = 0; a < psis.size(); ++a)
      for (size_t b = a + 1; b < psis.size(); ++b)
        CHECK(std::abs(inner_product(psis[a], psis[b], sp)) <= 1e-7);
  }
  SUBCASE("index out of range throws") {
    CHECK_THROWS_AS(sls_eigenfunctions(spec, p, 7, 0.1), std::out_of_range);
  }
}

TEST_CASE("SLS Hilbert-Schmidt norm") {
  SUBCASE("zero amplitude") {
    CHECK(sls_hs_norm({1.0, 0.0, 1.0, 1.0, 1.0}) == doctest::Approx(0.0));
  }
  SUBCASE("closed form arithmetic, alpha = 0") {
    // trace identity oracle: sum mu_n = k^2 T^2 / 2
    SlsParams p{1.0, 1.0, 0.5, 1.0, 1.0};
    CHECK(sls_hs_norm(p) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    const SlsSpectrum spec = sls_spectrum(p, 4000);
    double trace = 0.0;
    for (double mu : spec.mu) trace += mu;
    CHECK(std::sqrt(trace) == doctest::Approx(sls_hs_norm(p)).epsilon(1e-3));
  }
  SUBCASE("closed form matches x = 2 alpha T evaluation") {
    SlsParams p{2.0, 1.0, 1.0, 1.0, 1.0};  // alpha = 0.5, k = 0.5
    const double x = 2.0 * 0.5 * 1.0;
    const double expected = 0.5 * std::sqrt((std::exp(-x) - 1.0 + x) / (x * x));
    CHECK(sls_hs_norm(p) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("Frobenius norm of the dense discretization agrees within 0.5%") {
    SlsParams p{2.0, 1.0, 1.0, 1.0, 1.0};
    HistorySpace sp = make_space(p.T, 2000, p.lambda0);
    const TimeGrid& g = sp.grid();
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      const double wi = sp.weighted_quad()(i);
      for (int j = i; j < g.size(); ++j) {
        const double q = segment_weight(j - i, g.n - i, g.dt(), sp.rule()) *
                         p.C1 * std::exp(-p.lambda * (g.node(j) - g.node(i))) / p.C0;
        acc += wi * q * q / sp.weighted_quad()(j);
      }
    }
    CHECK(std::sqrt(acc) == doctest::Approx(sls_hs_norm(p)).epsilon(5e-3));
  }
}

TEST_CASE("relaxation function") {
  SlsParams p{1.0, 0.5, 1.0, 1.0, 1.0};
  HistorySpace sp = make_space(p.T, 4000, p.lambda0);
  const ScalarKernel kern = ExpKernel{p.C1, p.lambda};
  auto apply = [&](const HistorySample& f) { return apply_S(kern, p.C0, f, sp); };
  SUBCASE("empty support gives zero") {
    CHECK(relaxation_function(apply, 0.0, sp) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("matches the exact integral (k/lambda)(1 - e^{-lambda rho})") {
    for (double rho : {0.25, 0.5, 0.75, 1.0}) {
      const double exact = p.k() / p.lambda * (1.0 - std::exp(-p.lambda * rho));
      CHECK(relaxation_function(apply, rho, sp) == doctest::Approx(exact).epsilon(1e-3));
    }
  }
}

TEST_CASE("exact step histories") {
  SlsParams p{2.0, 1.0, 1.0, 1.0, 1.0};
  TimeGrid grid(1.0, 1000);
  const StepHistories h = step_exact(p, grid);
  SUBCASE("support boundary") {
    CHECK(h.inelastic(grid.n / 2) == doctest::Approx(0.0));
    CHECK(h.inelastic(grid.n) == 0.0);
  }
  SUBCASE("present value") {
    CHECK(h.inelastic(0) ==
          doctest::Approx(0.5 * (1.0 - std::exp(-0.5))).epsilon(1e-12));
  }
  SUBCASE("consistency ep = eps - sigma/C0 on the support") {
    for (int i = 0; i < grid.size(); ++i) {
      const double ep = h.strain(i) - h.stress(i) / p.C0;
      CHECK(std::abs(h.inelastic(i) - ep) <= 1e-12);
    }
  }
}

TEST_CASE("near-degenerate alpha uses the closed-form branch") {
  SlsParams p{1.0, 1.0, 0.5 + 1e-14, 1.0, 1.0};
  const SlsSpectrum spec = sls_spectrum(p, 3);
  const double pi = std::numbers::pi;
  CHECK(spec.kappa[0] == doctest::Approx(0.5 * pi).epsilon(1e-12));
}
