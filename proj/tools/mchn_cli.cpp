// mchn: run an experiment described by an INI config.
//
//   mchn run config.ini [--jobs N]
//   mchn kinds
//
// Output goes to [output] dir, or to $MCHN_OUTPUT_DIR when set.

#include <iostream>

#include "CLI11.hpp"
#include "mchn/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mCH-Novikov-CH peakon, PDE and wave-breaking experiments"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned jobs = 1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run the scenario described by a config file");
  run->add_option("config", config_path, "INI config")->required()->check(CLI::ExistingFile);
  run->add_option("-j,--jobs", jobs, "worker threads for independent sweep entries")->check(CLI::Range(1u, 256u));
  run->add_flag("-q,--quiet", quiet, "do not print the artifact list");

  auto* kinds = app.add_subcommand("kinds", "list scenario kinds");

  CLI11_PARSE(app, argc, argv);

  if (kinds->parsed()) {
    for (const auto& k : mchn::scenario_kinds()) std::cout << k << '\n';
    return 0;
  }

  try {
    const auto cfg = mchn::Config::load(config_path);
    const auto out = mchn::run_scenario(cfg, {jobs});
    if (!quiet) {
      for (const auto& a : out.artifacts) std::cout << a << '\n';
      if (out.summary.contains("run") && out.summary["run"].value("breakdown", false))
        std::cout << "breakdown recorded at t = " << mchn::format_double(out.summary["run"]["t_last"].get<double>())
                  << '\n';
    }
    if (out.exit_code != 0) std::cerr << out.kind << ": built-in check failed (see artifacts)\n";
    return out.exit_code;
  } catch (const mchn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
