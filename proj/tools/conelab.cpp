// conelab: batch driver for the cone-multiplier laboratory.
//
//   conelab <command> --config <path> [--out <dir>]
//
// Commands: phi, caps, fourier-decay, kernel-decay, lemma-check <name>,
// operator-selftest, weak-type. Each writes its CSVs plus summary.json into
// the output directory; exit 0 iff all hard assertions pass, 2 on usage or
// config errors, 3 on quadrature-resolution refusals.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "conelab/pipelines.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cone-multiplier laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", lemma_name;
  const std::vector<std::string> commands{
      "phi",           "caps",   "fourier-decay",     "kernel-decay",
      "lemma-check",   "weak-type", "operator-selftest"};
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value experiment config");
    sub->add_option("--out", out_dir, "output directory (default: .)");
    if (name == "lemma-check")
      sub->add_option("name", lemma_name,
                      "lemma id: 2.2 2.3 3.1 3.2 4.1 4.2 4.3 cor2.1 cor3.4 "
                      "scaling3.2")
          ->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (const char* env = std::getenv("CONELAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) conelab::thread_cap() = n;
  }

  try {
    const conelab::Config cfg =
        config_path.empty() ? conelab::Config()
                            : conelab::Config::from_file(config_path);
    const std::string command = app.get_subcommands().front()->get_name();
    const conelab::CommandResult res =
        conelab::run_command(command, lemma_name, cfg, out_dir);
    std::ofstream summary(out_dir + "/summary.json");
    summary << res.summary.dump(2) << "\n";
    std::cout << res.summary.dump(2) << std::endl;
    return res.exit_code;
  } catch (const conelab::ResolutionError& e) {
    std::cerr << "resolution refusal: " << e.what()
              << " (required: " << e.required() << ")" << std::endl;
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
