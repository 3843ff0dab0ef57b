#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bmild/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mild-solution solver and verification harness for the 3D Boussinesq system"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  const char* commands[] = {"solve", "verify-kernels", "scaling-test", "uniqueness-test",
                            "norm-decay"};
  for (const char* name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the 'out' key)");
    sub->add_option("--seed", seed, "random seed (overrides the 'seed' key)")
        ->each([&](const std::string&) { seed_given = true; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bmild::kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  bmild::ExperimentConfig cfg;
  try {
    cfg = bmild::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_given) cfg.data.seed = seed;
  } catch (const bmild::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bmild::kExitConfig;
  }
  return bmild::run_command(command, cfg, std::cout, std::cerr);
}
