// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include "histop/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "histop/errors.hpp"
#include "histop/model_io.hpp"
#include "histop/reduce.hpp"

namespace histop {

namespace {

namespace fs = std::filesystem;

TimeGrid config_grid(const RunConfig& cfg) { return TimeGrid(cfg.space.T, cfg.space.n); }

HistorySpace config_space(const RunConfig& cfg) {
  return HistorySpace(config_grid(cfg), WeightFn{cfg.space.lambda0}, cfg.space.rule);
}

std::string out_path(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

StrainProgram read_program_file(const std::string& path, const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open program file '" + path + "'");
  StrainProgram program{grid, Eigen::VectorXd::Zero(grid.size())};
  std::string line;
  std::getline(in, line);  // header
  int i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tcell, ecell;
    if (!std::getline(ss, tcell, ',') || !std::getline(ss, ecell, ','))
      throw config_error("program file '" + path + "': malformed line");
    if (i >= grid.size())
      throw config_error("program file '" + path + "': more rows than grid nodes");
    const double t = std::stod(tcell);
    if (std::abs(t - grid.node(i)) > 1e-9 * std::max(1.0, grid.T))
      throw config_error("program file '" + path + "': node " + std::to_string(i) +
                         " does not lie on the grid");
    program.values(i) = std::stod(ecell);
    ++i;
  }
  if (i != grid.size())
    throw config_error("program file '" + path + "': fewer rows than grid nodes");
  return program;
}

// H-norm at final time of an evolution difference: reverse into a history.
double evolution_error_h(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         const HistorySpace& sp) {
  HistorySample h(a.size());
  for (int i = 0; i < a.size(); ++i) h(i) = a(a.size() - 1 - i) - b(a.size() - 1 - i);
  return norm_h(h, sp);
}

OperatorMatrix assemble_for(const RunConfig& cfg, Oracle& oracle, const BasisSpec& b) {
  if (cfg.reduction.closed_form && cfg.oracle.type == "sls") {
    SlsParams p{cfg.oracle.sls.C0, cfg.oracle.sls.C1, cfg.oracle.sls.lambda,
                cfg.space.lambda0, cfg.space.T};
    return assemble_closed_form(p, b);
  }
  return assemble_from_oracle(oracle, b);
}

void write_histogram(const std::string& path, const std::vector<double>& samples,
                     const GammaSpec& spec) {
  const int nbins = 24;
  double max = 0.0;
  for (double s : samples) max = std::max(max, s);
  const double width = (max > 0.0 ? max : 1.0) * 1.05 / nbins;
  std::vector<long long> counts(nbins, 0);
  for (double s : samples) {
    int bin = std::min(nbins - 1, static_cast<int>(s / width));
    counts[bin]++;
  }
  const double scale = spec.mean / spec.shape;
  std::vector<CsvRow> rows;
  for (int bin = 0; bin < nbins; ++bin) {
    const double lo = bin * width, hi = (bin + 1) * width, mid = 0.5 * (lo + hi);
    const double pdf = std::pow(mid, spec.shape - 1.0) * std::exp(-mid / scale) /
                       (std::tgamma(spec.shape) * std::pow(scale, spec.shape));
    rows.push_back({lo, hi, counts[bin], pdf});
  }
  write_csv(path, {"bin_lo", "bin_hi", "count", "gamma_pdf_mid"}, rows);
}

std::shared_ptr<RveModel> build_rve_model(const RunConfig& cfg) {
  const auto& r = cfg.oracle.rve;
  if (!r.mesh_file.empty())
    return std::make_shared<RveModel>(read_mesh_file(r.mesh_file));
  GrainSampler sampler;
  sampler.seed = r.seed_set ? r.seed : cfg.seed;
  sampler.viscosity = r.gamma_visc;
  sampler.reltime = r.gamma_tau;
  sampler.branches = r.branches;
  sampler.mu_inf = r.mu_inf;
  sampler.kappa = r.kappa;
  return std::make_shared<RveModel>(
      build_grain_cube(r.grains_per_side, r.elems_per_grain_side, sampler));
}

}  // namespace

BuiltOracle make_oracle(const RunConfig& cfg) {
  BuiltOracle out;
  const TimeGrid grid = config_grid(cfg);
  if (cfg.oracle.type == "sls") {
    out.oracle = std::make_unique<SlsOracle>(cfg.oracle.sls.C0, cfg.oracle.sls.C1,
                                             cfg.oracle.sls.lambda, grid);
  } else if (cfg.oracle.type == "prony") {
    out.oracle = std::make_unique<PronyOracle>(cfg.oracle.prony, grid);
  } else if (cfg.oracle.type == "rve") {
    out.model = build_rve_model(cfg);
    out.oracle = std::make_unique<RveOracle>(out.model, grid);
  } else {
    throw config_error("config: oracle.type: no oracle configured");
  }
  return out;
}

StrainProgram make_test_program(const RunConfig& cfg) {
  const TimeGrid grid = config_grid(cfg);
  StrainProgram program{grid, Eigen::VectorXd::Zero(grid.size())};
  if (!cfg.tests.program_file.empty())
    return read_program_file(cfg.tests.program_file, grid);
  if (cfg.tests.parabolic) {
    for (int i = 0; i < grid.size(); ++i) {
      const double t = grid.node(i);
      program.values(i) = cfg.tests.literal_parabola
                              ? 4.0 / 25.0 * t * (1.0 - t)
                              : 4.0 / (grid.T * grid.T) * t * (grid.T - t);
    }
    return program;
  }
  // unit step at t = T/2; history at t = T equals the canonical step history
  for (int i = 0; i < grid.size(); ++i)
    program.values(i) = grid.node(i) >= 0.5 * grid.T ? 1.0 : 0.0;
  return program;
}

void cmd_spectrum(const RunConfig& cfg, const std::string& out_dir) {
  BuiltOracle built;
  const bool analytic = cfg.oracle.type == "sls";
  if (!cfg.reduction.closed_form) built = make_oracle(cfg);
  std::vector<double> exact;
  if (analytic) {
    SlsParams p{cfg.oracle.sls.C0, cfg.oracle.sls.C1, cfg.oracle.sls.lambda,
                cfg.space.lambda0, cfg.space.T};
    const SlsSpectrum spec = sls_spectrum(p, cfg.k_max);
    exact = spec.s;
  }
  std::vector<CsvRow> rows;
  for (int M : cfg.M_sweep) {
    const int m = (M - 1) / 2;
    BasisSpec b{m, config_space(cfg)};
    OperatorMatrix S;
    if (cfg.reduction.closed_form) {
      SlsParams p{cfg.oracle.sls.C0, cfg.oracle.sls.C1, cfg.oracle.sls.lambda,
                  cfg.space.lambda0, cfg.space.T};
      S = assemble_closed_form(p, b);
    } else {
      S = assemble_from_oracle(*built.oracle, b);
    }
    const ReducedModel full = svd_truncate(S, M);
    for (int k = 1; k <= std::min(cfg.k_max, M); ++k) {
      CsvRow row{static_cast<long long>(M), static_cast<long long>(k), full.s(k - 1)};
      if (analytic) row.push_back(exact[k - 1]);
      rows.push_back(std::move(row));
    }
  }
  std::vector<std::string> header{"M", "k", "s_Mk"};
  if (analytic) header.push_back("s_exact");
  write_csv(out_path(out_dir, "spectrum.csv"), header, rows);
  std::cout << "spectrum: wrote " << out_path(out_dir, "spectrum.csv") << "\n";
}

void cmd_identify(const RunConfig& cfg, const std::string& out_dir) {
  BuiltOracle built;
  BasisSpec b{cfg.m, config_space(cfg)};
  OperatorMatrix S;
  if (cfg.reduction.closed_form) {
    SlsParams p{cfg.oracle.sls.C0, cfg.oracle.sls.C1, cfg.oracle.sls.lambda,
                cfg.space.lambda0, cfg.space.T};
    S = assemble_closed_form(p, b);
  } else {
    built = make_oracle(cfg);
    S = assemble_from_oracle(*built.oracle, b);
  }
  const int M = S.M();
  const int N = cfg.reduction.N > 0 ? cfg.reduction.N : M;
  const ReducedModel full = svd_truncate(S, M);
  const ReducedModel rm = N == M ? full : svd_truncate(S, N);
  save_model(rm, out_path(out_dir, "model.json"));
  std::vector<CsvRow> rows;
  for (int k = 1; k <= M; ++k)
    rows.push_back({static_cast<long long>(k), full.s(k - 1)});
  write_csv(out_path(out_dir, "spectrum.csv"), {"k", "s_Mk"}, rows);
  if (N == M) {
    const double residual =
        spectral_norm(S.S - rm.Psi * rm.Phi.transpose());
    std::cout << "identify: N = M, reconstruction residual " << residual << "\n";
  }
  std::cout << "identify: wrote " << out_path(out_dir, "model.json") << "\n";
}

void cmd_predict(const RunConfig& cfg, const std::string& model_path,
                 const std::string& out_dir) {
  const ReducedModel rm = load_model(model_path);
  if (std::abs(rm.T - cfg.space.T) > 1e-12)
    throw config_error("config: space.T does not match the model duration");
  if (std::abs(rm.lambda0 - cfg.space.lambda0) > 1e-12)
    throw config_error("config: space.lambda0 does not match the model weight");
  const StrainProgram program = make_test_program(cfg);
  const HistorySpace sp = config_space(cfg);
  const Eigen::VectorXd predicted = predict_stress(rm, program, cfg.space.rule);

  BuiltOracle built;
  Eigen::VectorXd reference;
  bool have_ref = false;
  if (!cfg.oracle.type.empty()) {
    built = make_oracle(cfg);
    reference = built.oracle->evaluate(program).stress;
    have_ref = true;
  }

  std::vector<std::string> header{"t", "strain", "stress_predicted"};
  if (have_ref) {
    header.push_back("stress_reference");
    header.push_back("error_H");
  }
  double err_h = have_ref ? evolution_error_h(predicted, reference, sp) : 0.0;
  std::vector<CsvRow> rows;
  for (int i = 0; i < program.grid.size(); ++i) {
    CsvRow row{program.grid.node(i), program.values(i), predicted(i)};
    if (have_ref) {
      row.push_back(reference(i));
      row.push_back(err_h);
    }
    rows.push_back(std::move(row));
  }
  write_csv(out_path(out_dir, "prediction.csv"), header, rows);

  // history-frame comparison for the canonical step test on the SLS
  if (cfg.tests.step && cfg.tests.program_file.empty() && !cfg.tests.parabolic &&
      cfg.oracle.type == "sls") {
    SlsParams p{cfg.oracle.sls.C0, cfg.oracle.sls.C1, cfg.oracle.sls.lambda,
                cfg.space.lambda0, cfg.space.T};
    const StepHistories exact = step_exact(p, program.grid);
    BasisSpec b{rm.m, sp};
    const HistorySample ep_pred = apply_reduced(rm, exact.strain, b);
    std::vector<CsvRow> hrows;
    for (int i = 0; i < program.grid.size(); ++i)
      hrows.push_back({program.grid.node(i), ep_pred(i), exact.inelastic(i)});
    write_csv(out_path(out_dir, "step_history.csv"), {"tau", "ep_predicted", "ep_exact"},
              hrows);
  }

  // per-N convergence table with M = 2N+1, optimal vs Fourier baseline
  if (!cfg.reduction.N_list.empty() && have_ref) {
    const double ceff = built.oracle->instantaneous_modulus();
    const HistorySample eps_T = history_at(program, program.grid.n);
    HistorySample ep_ref(program.grid.size());
    const bool step_sls = cfg.oracle.type == "sls" && cfg.tests.program_file.empty() &&
                          !cfg.tests.parabolic && cfg.tests.step;
    if (step_sls) {
      SlsParams p{cfg.oracle.sls.C0, cfg.oracle.sls.C1, cfg.oracle.sls.lambda,
                  cfg.space.lambda0, cfg.space.T};
      ep_ref = step_exact(p, program.grid).inelastic;
    } else {
      for (int i = 0; i < program.grid.size(); ++i)
        ep_ref(i) = eps_T(i) - reference(program.grid.n - i) / ceff;
    }
    std::vector<CsvRow> crows;
    for (int N : cfg.reduction.N_list) {
      const int m = N;
      BasisSpec b{m, sp};
      OperatorMatrix S = assemble_for(cfg, *built.oracle, b);
      const ReducedModel opt = svd_truncate(S, N);
      HistorySample diff = apply_reduced(opt, eps_T, b) - ep_ref;
      CsvRow row{static_cast<long long>(N), static_cast<long long>(2 * N + 1),
                 norm_h(diff, sp)};
      if (cfg.reduction.fourier_baseline) {
        const ReducedModel four = fourier_truncate(S, N);
        diff = apply_reduced(four, eps_T, b) - ep_ref;
        row.push_back(norm_h(diff, sp));
      }
      crows.push_back(std::move(row));
    }
    std::vector<std::string> cheader{"N", "M", "error_H_optimal"};
    if (cfg.reduction.fourier_baseline) cheader.push_back("error_H_fourier");
    write_csv(out_path(out_dir, "convergence.csv"), cheader, crows);
  }
  std::cout << "predict: wrote " << out_path(out_dir, "prediction.csv") << "\n";
}

void cmd_rve(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.oracle.type != "rve")
    throw config_error("config: oracle.type: cmd_rve requires an rve oracle");
  const std::shared_ptr<RveModel> model = build_rve_model(cfg);
  const TimeGrid grid = config_grid(cfg);

  if (!model->sampled_parameters.empty()) {
    std::vector<double> eta, tau;
    std::vector<CsvRow> srows;
    long long grain = 0, branch = 0;
    for (const auto& [e, t] : model->sampled_parameters) {
      eta.push_back(e);
      tau.push_back(t);
      srows.push_back({grain, branch, e, t});
      if (++branch == cfg.oracle.rve.branches) {
        branch = 0;
        ++grain;
      }
    }
    write_histogram(out_path(out_dir, "rve_eta_hist.csv"), eta, cfg.oracle.rve.gamma_visc);
    write_histogram(out_path(out_dir, "rve_tau_hist.csv"), tau, cfg.oracle.rve.gamma_tau);
    write_csv(out_path(out_dir, "rve_samples.csv"), {"grain", "branch", "eta", "tau"},
              srows);
  }

  const Eigen::MatrixXd cbar = effective_elastic(*model);
  std::vector<CsvRow> crows;
  for (int i = 0; i < cbar.rows(); ++i) {
    CsvRow row;
    for (int j = 0; j < cbar.cols(); ++j) row.push_back(cbar(i, j));
    crows.push_back(std::move(row));
  }
  std::vector<std::string> cheader;
  for (int j = 0; j < cbar.cols(); ++j) cheader.push_back("C" + std::to_string(j + 1));
  write_csv(out_path(out_dir, "rve_effective_elastic.csv"), cheader, crows);

  RveOracle oracle(model, grid);
  BasisSpec b{cfg.m, config_space(cfg)};
  for (int jidx : cfg.oracle.rve.response_js) {
    if (std::abs(jidx) > cfg.m)
      throw config_error("config: oracle.response_js: |j| must be <= basis.m");
    StrainProgram program{grid, Eigen::VectorXd(grid.size())};
    for (int i = 0; i < grid.size(); ++i)
      program.values(i) = basis_eval(jidx, grid.node(grid.n - i), b);
    const Eigen::VectorXd sigma = oracle.evaluate(program).stress;
    std::vector<CsvRow> rrows;
    for (int i = 0; i < grid.size(); ++i)
      rrows.push_back({grid.node(i), program.values(i), sigma(i)});
    write_csv(out_path(out_dir, "rve_response_j" + std::to_string(jidx) + ".csv"),
              {"t", "strain", "stress"}, rrows);
  }

  if (cfg.reduction.N > 0 || !cfg.reduction.N_list.empty()) {
    OperatorMatrix S = assemble_from_oracle(oracle, b);
    const int M = S.M();
    const int N = cfg.reduction.N > 0 ? cfg.reduction.N : M;
    const ReducedModel full = svd_truncate(S, M);
    save_model(N == M ? full : svd_truncate(S, N), out_path(out_dir, "model.json"));
    std::vector<CsvRow> srows;
    for (int k = 1; k <= M; ++k)
      srows.push_back({static_cast<long long>(k), full.s(k - 1)});
    write_csv(out_path(out_dir, "spectrum.csv"), {"k", "s_Mk"}, srows);
  }
  std::cout << "rve: outputs written to " << out_dir << "\n";
}

}  // namespace histop
