// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "histop/errors.hpp"
#include "histop/rve.hpp"

using namespace histop;

namespace {

// hand algebra: series chain of viscoelastic layers in Laplace domain
double series_modulus(const std::vector<LaminateLayer>& layers,
                      const std::vector<double>& fractions, double s) {
  double inv = 0.0;
  for (size_t l = 0; l < layers.size(); ++l) {
    double m = layers[l].modulus;
    for (const auto& b : layers[l].branches) m -= b.mu / (1.0 + s * b.tau);
    inv += fractions[l] / m;
  }
  return 1.0 / inv;
}

double series_elastic(const std::vector<LaminateLayer>& layers,
                      const std::vector<double>& fractions) {
  double inv = 0.0;
  for (size_t l = 0; l < layers.size(); ++l) inv += fractions[l] / layers[l].modulus;
  return 1.0 / inv;
}

PronyKernel test_material() { return PronyKernel{1.0, {{2.0, 1.0}, {1.0, 0.5}, {0.5, 2.0}}}; }

Eigen::MatrixXd shear_path(const TimeGrid& g, const Eigen::VectorXd& eps_xy, int n_comp) {
  Eigen::MatrixXd ebar = Eigen::MatrixXd::Zero(g.size(), n_comp);
  if (n_comp == 6)
    ebar.col(5) = std::sqrt(2.0) * eps_xy;
  else
    ebar.col(0) = eps_xy;
  return ebar;
}

}  // namespace

TEST_CASE("gamma sampling") {
  std::mt19937_64 rng(99);
  SUBCASE("sample mean and variance match the distribution") {
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = gamma_sample(2.0, 2.0, rng);
      CHECK(x > 0.0);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.015));  // +- 0.03
    CHECK(var == doctest::Approx(2.0).epsilon(0.05));    // mean^2/shape +- 0.1
  }
  SUBCASE("deterministic for a fixed seed") {
    std::mt19937_64 a(7), b(7);
    for (int i = 0; i < 10; ++i)
      CHECK(gamma_sample(1.0, 2.0, a) == gamma_sample(1.0, 2.0, b));
  }
  SUBCASE("shape below one") {
    double sum = 0.0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) sum += gamma_sample(1.5, 0.7, rng);
    CHECK(sum / n == doctest::Approx(1.5).epsilon(0.03));
  }
}

TEST_CASE("laminate construction and homogenization") {
  SUBCASE("single material: effective kernel equals the constituent kernel") {
    const PronyKernel mat = test_material();
    RveModel model = build_laminate({layer_from_prony(mat)}, {1.0});
    CHECK(model.n_dof == 0);
    const double C = effective_elastic(model)(0, 0);
    CHECK(C == doctest::Approx(mat.instantaneous()).epsilon(1e-14));
    for (double s : {0.1, 1.0, 10.0}) {
      double ktilde = 0.0;
      for (const auto& b : mat.branches) ktilde += b.mu / (1.0 + s * b.tau);
      CHECK(effective_kernel_laplace(model, s)(0, 0) ==
            doctest::Approx(ktilde).epsilon(1e-14));
    }
  }
  SUBCASE("two elastic layers give the harmonic mean") {
    RveModel model = build_laminate({{3.0, {}}, {1.0, {}}}, {0.5, 0.5});
    CHECK(effective_elastic(model)(0, 0) ==
          doctest::Approx(2.0 * 3.0 * 1.0 / (3.0 + 1.0)).epsilon(1e-14));
  }
  SUBCASE("two SLS layers match the symbolic harmonic mean in Laplace") {
    const std::vector<LaminateLayer> layers = {
        layer_from_prony(PronyKernel{1.0, {{2.0, 1.0}}}),
        layer_from_prony(PronyKernel{0.5, {{1.0, 0.5}}})};
    const std::vector<double> fractions = {0.5, 0.5};
    RveModel model = build_laminate(layers, fractions);
    const double cbar = effective_elastic(model)(0, 0);
    CHECK(cbar == doctest::Approx(series_elastic(layers, fractions)).epsilon(1e-12));
    for (double s : {0.1, 1.0, 10.0}) {
      const double expected = cbar - series_modulus(layers, fractions, s);
      CHECK(effective_kernel_laplace(model, s)(0, 0) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(build_laminate({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_laminate({{1.0, {}}}, {0.7}), std::invalid_argument);
  }
}

TEST_CASE("grain cube construction") {
  GrainSampler sampler;
  sampler.seed = 42;
  SUBCASE("counts at paper scale") {
    RveModel model = build_grain_cube(4, 2, sampler);
    CHECK(model.materials.size() == 64);              // 4^3 grains
    CHECK(model.elements.size() == 8 * 8 * 8 * 8);    // 8^3 hexes, 8 gauss pts
    CHECK(model.sampled_parameters.size() == 64 * 3);
    double vol = 0.0;
    for (const auto& e : model.elements) vol += e.w;
    CHECK(vol == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("seed determinism") {
    RveModel a = build_grain_cube(2, 1, sampler);
    RveModel b = build_grain_cube(2, 1, sampler);
    REQUIRE(a.sampled_parameters.size() == b.sampled_parameters.size());
    for (size_t i = 0; i < a.sampled_parameters.size(); ++i) {
      CHECK(a.sampled_parameters[i].first == b.sampled_parameters[i].first);
      CHECK(a.sampled_parameters[i].second == b.sampled_parameters[i].second);
    }
  }
  SUBCASE("homogeneous cube reproduces the constituent moduli") {
    GrainSampler one = sampler;
    RveModel model = build_grain_cube(1, 2, one);  // single grain, 8 elements
    const PronyKernel shear{one.mu_inf, model.materials[0].branches};
    const Mandel6 expected = 3.0 * one.kappa * mandel_volumetric() +
                             2.0 * shear.instantaneous() * mandel_deviatoric();
    const Eigen::MatrixXd cbar = effective_elastic(model);
    CHECK((cbar - expected).lpNorm<Eigen::Infinity>() <= 1e-10);
    for (double s : {0.1, 1.0, 10.0}) {
      Eigen::MatrixXd ktilde = Eigen::MatrixXd::Zero(6, 6);
      for (const auto& b : model.materials[0].branches)
        ktilde += b.mu / (1.0 + s * b.tau) * 2.0 * mandel_deviatoric();
      CHECK((effective_kernel_laplace(model, s) - ktilde).lpNorm<Eigen::Infinity>() <=
            1e-10);
    }
  }
}

TEST_CASE("effective elastic moduli") {
  SUBCASE("Voigt bound via random macroscopic strains") {
    GrainSampler sampler;
    sampler.seed = 5;
    RveModel model = build_grain_cube(2, 1, sampler);
    const Eigen::MatrixXd cbar = effective_elastic(model);
    Eigen::MatrixXd voigt = Eigen::MatrixXd::Zero(6, 6);
    for (const auto& e : model.elements)
      voigt += e.w * model.materials[e.material].C;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd eps(6);
      for (int i = 0; i < 6; ++i) eps(i) = dist(rng);
      CHECK(eps.dot(cbar * eps) <= eps.dot(voigt * eps) + 1e-10);
    }
  }
  SUBCASE("gauge invariance: laminate via mesh file with redundant dof fixing") {
    // same physics, different discrete realization
    const std::vector<LaminateLayer> layers = {
        layer_from_prony(PronyKernel{1.0, {{2.0, 1.0}}}),
        layer_from_prony(PronyKernel{0.5, {{1.0, 0.5}}})};
    RveModel direct = build_laminate(layers, {0.5, 0.5});
    const std::string path = "test_mesh_laminate.txt";
    {
      std::ofstream out(path);
      out << "histop-mesh 1\n"
          << "ncomp 1\n"
          << "ndof 1\n"
          << "materials 2\n"
          << "scalar 3.0 1 2.0 1.0\n"
          << "scalar 1.5 1 1.0 0.5\n"
          << "elements 2\n"
          << "element 0.5 0\n"
          << "-2.0\n"
          << "element 0.5 1\n"
          << "2.0\n";
    }
    RveModel imported = read_mesh_file(path);
    std::remove(path.c_str());
    CHECK(effective_elastic(imported)(0, 0) ==
          doctest::Approx(effective_elastic(direct)(0, 0)).epsilon(1e-12));
    for (double s : {0.5, 2.0})
      CHECK(effective_kernel_laplace(imported, s)(0, 0) ==
            doctest::Approx(effective_kernel_laplace(direct, s)(0, 0)).epsilon(1e-12));
  }
}

TEST_CASE("effective kernel in Laplace domain") {
  GrainSampler sampler;
  sampler.seed = 12;
  RveModel model = build_grain_cube(2, 1, sampler);
  SUBCASE("vanishes as s -> infinity") {
    const Eigen::MatrixXd cbar = effective_elastic(model);
    const Eigen::MatrixXd k = effective_kernel_laplace(model, 1e8);
    CHECK(k.norm() <= 1e-6 * cbar.norm());
  }
  SUBCASE("eigenvalues decrease in s") {
    double prev = std::numeric_limits<double>::infinity();
    for (double s : {0.1, 0.3, 1.0, 3.0, 10.0}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(effective_kernel_laplace(model, s));
      CHECK(es.eigenvalues().maxCoeff() < prev + 1e-12);
      prev = es.eigenvalues().maxCoeff();
    }
  }
  SUBCASE("symmetric output") {
    const Eigen::MatrixXd k = effective_kernel_laplace(model, 1.0);
    CHECK((k - k.transpose()).norm() <= 1e-12);
  }
}

TEST_CASE("time-domain solve") {
  const PronyKernel mat = test_material();
  TimeGrid grid(5.0, 250);
  SUBCASE("homogeneous cube equals the scalar Prony oracle") {
    GrainSampler sampler;
    RveModel model = build_grain_cube(1, 2, sampler);
    // same shear law, doubled for the Mandel shear channel
    PronyKernel doubled{2.0 * sampler.mu_inf, {}};
    for (const auto& b : model.materials[0].branches)
      doubled.branches.push_back({2.0 * b.mu, b.tau});
    Eigen::VectorXd eps(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      const double t = grid.node(i);
      eps(i) = std::sin(1.3 * t) + 0.2 * t;
    }
    const Eigen::MatrixXd sbar = solve_time_domain(model, grid, shear_path(grid, eps, 6));
    PronyOracle oracle(doubled, grid);
    const Eigen::VectorXd ref = oracle.evaluate({grid, eps}).stress;
    for (int i = 0; i < grid.size(); i += 25)
      CHECK(sbar(i, 5) / std::sqrt(2.0) == doctest::Approx(ref(i)).epsilon(1e-9));
  }
  SUBCASE("elastic limit matches effective_elastic") {
    RveModel model = build_laminate({{3.0, {}}, {1.0, {}}}, {0.5, 0.5});
    Eigen::VectorXd eps(grid.size());
    for (int i = 0; i < grid.size(); ++i) eps(i) = grid.node(i) / grid.T;
    const Eigen::MatrixXd sbar = solve_time_domain(model, grid, shear_path(grid, eps, 1));
    const double cbar = effective_elastic(model)(0, 0);
    for (int i = 0; i < grid.size(); i += 25)
      CHECK(sbar(i, 0) == doctest::Approx(cbar * eps(i)).epsilon(1e-9));
  }
  SUBCASE("dt halving leaves the homogeneous response unchanged") {
    GrainSampler sampler;
    RveModel model = build_grain_cube(1, 1, sampler);
    TimeGrid fine(5.0, 500);
    auto program = [](const TimeGrid& g) {
      Eigen::VectorXd eps(g.size());
      for (int i = 0; i < g.size(); ++i)
        eps(i) = g.node(i) < 2.5 ? g.node(i) / 2.5 : 1.0;  // piecewise linear
      return eps;
    };
    const Eigen::MatrixXd s1 =
        solve_time_domain(model, grid, shear_path(grid, program(grid), 6));
    const Eigen::MatrixXd s2 =
        solve_time_domain(model, fine, shear_path(fine, program(fine), 6));
    CHECK(std::abs(s1(grid.n, 5) - s2(fine.n, 5)) <= 1e-8);
  }
  SUBCASE("instantaneous step response hits the elastic channel value") {
    GrainSampler sampler;
    sampler.seed = 21;
    RveModel model = build_grain_cube(2, 1, sampler);
    const Eigen::MatrixXd cbar = effective_elastic(model);
    Eigen::VectorXd eps = Eigen::VectorXd::Ones(grid.size());
    const Eigen::MatrixXd sbar = solve_time_domain(model, grid, shear_path(grid, eps, 6));
    CHECK(sbar(0, 5) / std::sqrt(2.0) ==
          doctest::Approx(cbar(5, 5) / 1.0).epsilon(1e-6));
  }
  SUBCASE("Hill consistency for the elastic homogeneous cube") {
    GrainSampler sampler;
    RveModel model = build_grain_cube(1, 1, sampler);
    // strip branches: purely elastic
    for (auto& m : model.materials) m.branches.clear();
    Eigen::VectorXd eps = Eigen::VectorXd::Ones(grid.size());
    const Eigen::MatrixXd sbar = solve_time_domain(model, grid, shear_path(grid, eps, 6));
    // uniform fields: sigma . eps averaged equals sbar . ebar
    const double lhs = sbar.row(0).dot(shear_path(grid, eps, 6).row(0));
    const Eigen::VectorXd eb = shear_path(grid, eps, 6).row(0).transpose();
    const Eigen::VectorXd sig = model.materials[0].C * eb;
    CHECK(lhs == doctest::Approx(sig.dot(eb)).epsilon(1e-10));
  }
}

TEST_CASE("time domain cross-checks the Laplace kernel") {
  // relaxation test: s L{sigma}(s) = Cbar - Ktilde(s), channel-wise, <= 1%
  const std::vector<LaminateLayer> layers = {
      layer_from_prony(PronyKernel{1.0, {{2.0, 1.0}}}),
      layer_from_prony(PronyKernel{0.5, {{1.0, 0.5}}})};
  RveModel model = build_laminate(layers, {0.5, 0.5});
  const double t_end = 20.0;
  TimeGrid grid(t_end, 4000);
  Eigen::VectorXd eps = Eigen::VectorXd::Ones(grid.size());
  const Eigen::MatrixXd sbar = solve_time_domain(model, grid, shear_path(grid, eps, 1));
  const double cbar = effective_elastic(model)(0, 0);
  for (double s : {0.5, 1.0, 2.0}) {
    double laplace = 0.0;
    for (int i = 0; i + 1 < grid.size(); ++i) {
      const double t0 = grid.node(i), t1 = grid.node(i + 1);
      laplace += 0.5 * (std::exp(-s * t0) * sbar(i, 0) + std::exp(-s * t1) * sbar(i + 1, 0)) *
                 (t1 - t0);
    }
    laplace += sbar(grid.n, 0) * std::exp(-s * t_end) / s;  // constant tail
    const double expected = cbar - effective_kernel_laplace(model, s)(0, 0);
    CHECK(s * laplace == doctest::Approx(expected).epsilon(0.01));
  }
}

TEST_CASE("rve oracle adapter") {
  GrainSampler sampler;
  sampler.seed = 3;
  auto model = std::make_shared<RveModel>(build_grain_cube(2, 1, sampler));
  TimeGrid grid(5.0, 200);
  RveOracle oracle(model, grid);
  SUBCASE("step probe equals the Mandel 66 channel") {
    const Eigen::MatrixXd cbar = effective_elastic(*model);
    CHECK(oracle.instantaneous_modulus() == doctest::Approx(cbar(5, 5)).epsilon(1e-9));
  }
  SUBCASE("linearity") {
    StrainProgram p{grid, Eigen::VectorXd(grid.size())};
    for (int i = 0; i < grid.size(); ++i) p.values(i) = std::sin(grid.node(i));
    const Eigen::VectorXd s1 = oracle.evaluate(p).stress;
    StrainProgram p2{grid, 3.0 * p.values};
    const Eigen::VectorXd s2 = oracle.evaluate(p2).stress;
    CHECK((s2 - 3.0 * s1).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("mesh file errors") {
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_mesh_file("no_such_mesh.txt"), config_error);
  }
  SUBCASE("bad header") {
    const std::string path = "test_mesh_bad.txt";
    {
      std::ofstream out(path);
      out << "not-a-mesh 1\n";
    }
    CHECK_THROWS_AS(read_mesh_file(path), config_error);
    std::remove(path.c_str());
  }
}
