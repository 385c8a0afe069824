// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "histop/commands.hpp"
#include "histop/errors.hpp"

namespace {

constexpr const char* kVersion = "histop 0.1.0";

constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;
constexpr int kExitNumerics = 4;

struct CommonArgs {
  std::string config;
  std::string out;
  std::string model;
  bool paper_scale = false;
  bool seed_set = false;
  std::uint64_t seed = 0;
};

int run(const std::string& command, const CommonArgs& args) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  histop::RunConfig cfg = histop::load_config(args.config);
  if (args.seed_set) cfg.seed = args.seed;
  if (args.paper_scale) histop::apply_paper_scale(cfg);
  const std::string out_dir = args.out.empty() ? cfg.output_dir : args.out;

  std::cout << kVersion << "\n" << "config:\n" << cfg.echo << "\n";

  if (command == "spectrum") {
    histop::cmd_spectrum(cfg, out_dir);
  } else if (command == "identify") {
    histop::cmd_identify(cfg, out_dir);
  } else if (command == "predict") {
    if (args.model.empty())
      throw histop::config_error("predict: --model PATH is required");
    histop::cmd_predict(cfg, args.model, out_dir);
  } else {
    histop::cmd_rve(cfg, out_dir);
  }
  const std::chrono::duration<double> dt = clock::now() - t0;
  std::cout << "elapsed: " << dt.count() << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal finite-rank hereditary laws for linear viscoelasticity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs args;
  for (const char* name : {"spectrum", "identify", "predict", "rve"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "run configuration (JSON)")->required();
    sub->add_option("--out", args.out, "output directory (default: config output_dir)");
    if (std::string(name) == "predict")
      sub->add_option("--model", args.model, "reduced model file")->required();
    sub->add_flag("--paper-scale", args.paper_scale,
                  "paper-scale polycrystal: 4^3 grains, m=20, T=5");
    sub->add_option("--seed", args.seed, "override the run seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run(app.get_subcommands().front()->get_name(), args);
  } catch (const histop::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const histop::oracle_error& e) {
    std::cerr << "oracle error: " << e.what() << "\n";
    return kExitOracle;
  } catch (const histop::numerics_error& e) {
    std::cerr << "numerics error: " << e.what() << "\n";
    return kExitNumerics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "numerics error: " << e.what() << "\n";
    return kExitNumerics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
