// pulsedg: run, convergence, drift and reconstruct commands.
//
//   pulsedg run --config case.json --out dir
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <iostream>

#include "pulsedg/error.hpp"
#include "pulsedg/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"DG solvers for short-pulse-type equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    return sub;
  };
  auto* run = add("run", "integrate one configuration");
  auto* conv = add("convergence", "error table over the mesh sequence");
  auto* drift = add("drift", "conserved-quantity drift");
  auto* recon = add("reconstruct", "parametric (x, u) curves at the output times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const pulsedg::RunConfig cfg = pulsedg::load_config(config_path);
    if (run->parsed()) pulsedg::cmd_run(cfg, out_dir);
    else if (conv->parsed()) pulsedg::cmd_convergence(cfg, out_dir);
    else if (drift->parsed()) pulsedg::cmd_drift(cfg, out_dir);
    else if (recon->parsed()) pulsedg::cmd_reconstruct(cfg, out_dir);
  } catch (const pulsedg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const pulsedg::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
