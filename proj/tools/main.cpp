#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"steady-state and stability analysis of the concentration-"
               "dependent microtubule growth model"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir;
  int seed = 0, threads = 0;
  bool have_seed = false, have_threads = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "parameter preset (fig3 or typical)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed recorded in artifacts")->trigger_on_parse();
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  const char* commands[] = {"classical", "endstate", "spectral-report", "dispersion",
                            "profile",   "evans",    "evolve",          "singular",
                            "pipeline"};
  for (const char* c : commands) app.add_subcommand(c)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  have_seed = app.count("--seed") > 0;
  have_threads = app.count("--threads") > 0;

  try {
    mtstab::cli::Json config = mtstab::cli::Json::object();
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      is >> config;
    }
    config["command"] = app.get_subcommands().front()->get_name();
    if (!preset.empty()) config["preset"] = preset;
    if (!out_dir.empty()) config["output_dir"] = out_dir;
    if (have_seed) config["seed"] = seed;
    if (have_threads) config["threads"] = threads;

    const auto outcome = mtstab::cli::run(config);
    std::cout << outcome.verdict.dump(2) << "\n";
    return outcome.exit_code;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
