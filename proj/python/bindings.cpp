// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "histop/commands.hpp"
#include "histop/model_io.hpp"
#include "histop/reduce.hpp"

namespace py = pybind11;
using namespace histop;

namespace {

HistorySpace make_space(double T, int n, double lambda0, const std::string& rule) {
  return HistorySpace(TimeGrid(T, n), WeightFn{lambda0}, quad_rule_from_string(rule));
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Optimal finite-rank hereditary laws for linear viscoelasticity";

  py::class_<TimeGrid>(mod, "TimeGrid")
      .def(py::init<double, int>(), py::arg("T"), py::arg("n"))
      .def_readonly("T", &TimeGrid::T)
      .def_readonly("n", &TimeGrid::n)
      .def("node", &TimeGrid::node)
      .def("size", &TimeGrid::size);

  py::class_<HistorySpace>(mod, "HistorySpace")
      .def(py::init(&make_space), py::arg("T"), py::arg("n"), py::arg("lambda0"),
           py::arg("quadrature") = "simpson")
      .def_property_readonly("grid", &HistorySpace::grid)
      .def_property_readonly("quad_weights", &HistorySpace::quad_weights);

  py::class_<BasisSpec>(mod, "BasisSpec")
      .def(py::init([](int m, const HistorySpace& sp) {
             return BasisSpec{m, sp};
           }),
           py::arg("m"), py::arg("space"))
      .def_readonly("m", &BasisSpec::m)
      .def_property_readonly("size", &BasisSpec::size);

  mod.def("inner_product", &inner_product);
  mod.def("norm_h", &norm_h);
  mod.def("basis_eval", &basis_eval);
  mod.def("project", &project);
  mod.def("reconstruct", &reconstruct);
  mod.def("check_admissible",
          py::overload_cast<const Eigen::VectorXd&, const TimeGrid&>(&check_admissible));

  py::class_<SlsParams>(mod, "SlsParams")
      .def(py::init([](double C0, double C1, double lambda, double lambda0, double T) {
             return SlsParams{C0, C1, lambda, lambda0, T};
           }),
           py::arg("C0"), py::arg("C1"), py::arg("lambda"), py::arg("lambda0"),
           py::arg("T"))
      .def_readonly("C0", &SlsParams::C0)
      .def("k", &SlsParams::k)
      .def("alpha", &SlsParams::alpha);

  py::class_<SlsSpectrum>(mod, "SlsSpectrum")
      .def_readonly("kappa", &SlsSpectrum::kappa)
      .def_readonly("mu", &SlsSpectrum::mu)
      .def_readonly("s", &SlsSpectrum::s)
      .def_readonly("norm", &SlsSpectrum::norm);

  mod.def("sls_spectrum", &sls_spectrum, py::arg("params"), py::arg("n_max"));
  mod.def("sls_eigenfunctions", &sls_eigenfunctions);
  mod.def("sls_hs_norm", &sls_hs_norm);
  mod.def("step_exact", [](const SlsParams& p, const TimeGrid& g) {
    const StepHistories h = step_exact(p, g);
    return py::make_tuple(h.strain, h.inelastic, h.stress);
  });

  py::class_<StrainProgram>(mod, "StrainProgram")
      .def(py::init([](const TimeGrid& g, const Eigen::VectorXd& v) {
             return StrainProgram{g, v};
           }),
           py::arg("grid"), py::arg("values"))
      .def_readonly("values", &StrainProgram::values);

  py::class_<OracleResponse>(mod, "OracleResponse")
      .def_readonly("stress", &OracleResponse::stress)
      .def_readonly("oracle_id", &OracleResponse::oracle_id)
      .def_readonly("evaluations", &OracleResponse::evaluations);

  py::class_<Oracle>(mod, "Oracle")
      .def("evaluate", &Oracle::evaluate)
      .def("instantaneous_modulus", &Oracle::instantaneous_modulus)
      .def_property_readonly("id", &Oracle::id);

  py::class_<SlsOracle, Oracle>(mod, "SlsOracle")
      .def(py::init<double, double, double, TimeGrid>(), py::arg("C0"), py::arg("C1"),
           py::arg("lambda"), py::arg("grid"));

  py::class_<PronyBranch>(mod, "PronyBranch")
      .def(py::init([](double mu, double tau) {
             return PronyBranch{mu, tau};
           }),
           py::arg("mu"), py::arg("tau"))
      .def_readonly("mu", &PronyBranch::mu)
      .def_readonly("tau", &PronyBranch::tau);

  py::class_<PronyKernel>(mod, "PronyKernel")
      .def(py::init([](double mu_inf, const std::vector<PronyBranch>& branches) {
             return PronyKernel{mu_inf, branches};
           }),
           py::arg("mu_inf"), py::arg("branches"))
      .def("instantaneous", &PronyKernel::instantaneous)
      .def("relaxation", &PronyKernel::relaxation);

  py::class_<PronyOracle, Oracle>(mod, "PronyOracle")
      .def(py::init<PronyKernel, TimeGrid>(), py::arg("kernel"), py::arg("grid"));

  mod.def("sample_basis_responses", &sample_basis_responses);
  mod.def("history_at", &history_at);

  py::class_<OperatorMatrix>(mod, "OperatorMatrix")
      .def_readonly("S", &OperatorMatrix::S)
      .def_readonly("provenance", &OperatorMatrix::provenance)
      .def_readonly("C_eff", &OperatorMatrix::C_eff)
      .def_property_readonly("M", &OperatorMatrix::M);

  py::class_<ReducedModel>(mod, "ReducedModel")
      .def_readonly("m", &ReducedModel::m)
      .def_readonly("M", &ReducedModel::M)
      .def_readonly("N", &ReducedModel::N)
      .def_readonly("T", &ReducedModel::T)
      .def_readonly("lambda0", &ReducedModel::lambda0)
      .def_readonly("C_eff", &ReducedModel::C_eff)
      .def_readonly("s", &ReducedModel::s)
      .def_readonly("psi0", &ReducedModel::psi0)
      .def_readonly("Phi", &ReducedModel::Phi)
      .def_readonly("Psi", &ReducedModel::Psi)
      .def_readonly("kind", &ReducedModel::kind);

  mod.def("assemble_from_oracle", &assemble_from_oracle);
  mod.def("assemble_closed_form", &assemble_closed_form);
  mod.def("svd_truncate", &svd_truncate);
  mod.def("fourier_truncate", &fourier_truncate);
  mod.def("apply_reduced", &apply_reduced);
  mod.def("predict_stress", &predict_stress, py::arg("model"), py::arg("program"),
          py::arg("rule") = QuadRule::simpson);
  mod.def("save_model", &save_model);
  mod.def("load_model", &load_model);

  py::enum_<QuadRule>(mod, "QuadRule")
      .value("trapezoid", QuadRule::trapezoid)
      .value("simpson", QuadRule::simpson);

  py::class_<GammaSpec>(mod, "GammaSpec")
      .def(py::init([](double mean, double shape) {
             return GammaSpec{mean, shape};
           }),
           py::arg("mean"), py::arg("shape"));

  py::class_<GrainSampler>(mod, "GrainSampler")
      .def(py::init<>())
      .def_readwrite("seed", &GrainSampler::seed)
      .def_readwrite("viscosity", &GrainSampler::viscosity)
      .def_readwrite("reltime", &GrainSampler::reltime)
      .def_readwrite("branches", &GrainSampler::branches)
      .def_readwrite("mu_inf", &GrainSampler::mu_inf)
      .def_readwrite("kappa", &GrainSampler::kappa);

  py::class_<LaminateLayer>(mod, "LaminateLayer")
      .def(py::init([](double modulus, const std::vector<PronyBranch>& branches) {
             return LaminateLayer{modulus, branches};
           }),
           py::arg("modulus"), py::arg("branches"));

  py::class_<RveModel, std::shared_ptr<RveModel>>(mod, "RveModel")
      .def_readonly("n_comp", &RveModel::n_comp)
      .def_readonly("n_dof", &RveModel::n_dof)
      .def_property_readonly(
          "n_elements", [](const RveModel& m) { return m.elements.size(); })
      .def_readonly("sampled_parameters", &RveModel::sampled_parameters);

  mod.def("build_laminate", [](const std::vector<LaminateLayer>& layers,
                               const std::vector<double>& fractions) {
    return std::make_shared<RveModel>(build_laminate(layers, fractions));
  });
  mod.def("build_grain_cube", [](int grains, int elems, const GrainSampler& sampler) {
    return std::make_shared<RveModel>(build_grain_cube(grains, elems, sampler));
  });
  mod.def("solve_time_domain",
          [](std::shared_ptr<RveModel> model, const TimeGrid& grid,
             const Eigen::MatrixXd& ebar) { return solve_time_domain(*model, grid, ebar); });
  mod.def("effective_elastic",
          [](std::shared_ptr<RveModel> model) { return effective_elastic(*model); });
  mod.def("effective_kernel_laplace", [](std::shared_ptr<RveModel> model, double s) {
    return effective_kernel_laplace(*model, s);
  });

  py::class_<RveOracle, Oracle>(mod, "RveOracle")
      .def(py::init([](std::shared_ptr<RveModel> model, const TimeGrid& grid) {
             return RveOracle(model, grid);
           }),
           py::arg("model"), py::arg("grid"));
}
