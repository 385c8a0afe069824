// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "histop/kernels.hpp"
#include "histop/oracle.hpp"

namespace histop {

// Gamma(shape, scale = mean/shape); deterministic for a fixed engine state.
double gamma_sample(double mean, double shape, std::mt19937_64& rng);

struct GammaSpec {
  double mean = 1.0;
  double shape = 1.0;
};

// Per-grain material sampling for the polycrystal cube: branch viscosities
// eta ~ Gamma(mean 2, shape 2), relaxation times tau ~ Gamma(mean 1, shape 2),
// mu = eta/tau; volumetric response elastic with bulk modulus kappa.
struct GrainSampler {
  std::uint64_t seed = 0;
  GammaSpec viscosity{2.0, 2.0};
  GammaSpec reltime{1.0, 2.0};
  int branches = 3;
  double mu_inf = 1.0;
  double kappa = 5.0 / 3.0;
};

// One material point: instantaneous moduli C plus deviatoric Prony branches
// acting through the constant direction matrix dir (2 K_dev in 3D, [1] in 1D):
//   sigma(t) = C eps(t) - sum_b (mu_b/tau_b) dir \int_0^t e^{-(t-s)/tau_b} eps(s) ds.
struct RveMaterial {
  Eigen::MatrixXd C;
  Eigen::MatrixXd dir;
  std::vector<PronyBranch> branches;
};

// Quadrature point e with weight w_e and strain-displacement rows B_e over the
// listed fluctuation dofs (entry -1 = pinned, value zero).
struct RveElement {
  double w = 0.0;
  Eigen::MatrixXd B;  // n_comp x n_local
  std::vector<int> dofs;
  int material = 0;
};

struct RveModel {
  int n_comp = 6;
  int n_dof = 0;
  double volume = 0.0;
  std::vector<RveMaterial> materials;
  std::vector<RveElement> elements;
  // sampled (eta, tau) pairs per grain branch, for histogram export
  std::vector<std::pair<double, double>> sampled_parameters;
};

struct LaminateLayer {
  double modulus = 1.0;  // instantaneous
  std::vector<PronyBranch> branches;
};

LaminateLayer layer_from_prony(const PronyKernel& kernel);

// Series (Reuss) chain: one fluctuation dof per interior interface.
RveModel build_laminate(const std::vector<LaminateLayer>& layers,
                        const std::vector<double>& fractions);

// Periodic unit cube of grains_per_side^3 grains, trilinear hexahedra with
// 8-point Gauss quadrature; elems_per_grain_side^3 elements per grain.
RveModel build_grain_cube(int grains_per_side, int elems_per_grain_side,
                          const GrainSampler& sampler);

// Quasi-static viscoelastic stepping under a prescribed macroscopic strain
// path (rows = time nodes, cols = Mandel components); internal variables
// updated by exact exponential recursion, step stiffness factored once.
// Returns the average stress path.
Eigen::MatrixXd solve_time_domain(const RveModel& model, const TimeGrid& grid,
                                  const Eigen::MatrixXd& ebar);

Eigen::MatrixXd effective_elastic(const RveModel& model);

// Effective hereditary kernel in Laplace representation at real s > 0.
Eigen::MatrixXd effective_kernel_laplace(const RveModel& model, double s);

// Structured text mesh import: weights, dense B rows and material ids.
RveModel read_mesh_file(const std::string& path);

// Scalar shear-channel adapter: imposes eps_xy(t) strain-controlled (all other
// macroscopic components zero) and reads sigma_xy(t).
class RveOracle : public Oracle {
 public:
  RveOracle(std::shared_ptr<const RveModel> model, TimeGrid grid);
  const TimeGrid& grid() const override { return grid_; }
  std::string id() const override { return "rve"; }

 protected:
  Eigen::VectorXd respond(const Eigen::VectorXd& strain) override;

 private:
  std::shared_ptr<const RveModel> model_;
  TimeGrid grid_;
};

}  // namespace histop
