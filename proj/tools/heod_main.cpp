// heod: extract quantum-pathway amplitudes in open systems by Hamiltonian
// encoding and observable decoding, with a nested-quadrature cross-check.
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "heod/heod.hpp"

namespace {

int default_workers() {
  if (const char* env = std::getenv("HEOD_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HE-OD pathway analysis for open quantum systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int workers = default_workers();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--workers", workers, "sweep worker threads");
  };

  auto* simulate = app.add_subcommand("simulate", "propagate and write the trajectory");
  add_common(simulate);
  auto* pathways = app.add_subcommand("pathways", "run the encoded sweep and decode");
  add_common(pathways);
  auto* compare = app.add_subcommand("compare", "decoded amplitudes vs quadrature");
  add_common(compare);
  auto* validate = app.add_subcommand("validate-encoding", "collision and sample-count check");
  add_common(validate);

  auto* preset = app.add_subcommand("preset", "write a ready-made configuration");
  std::string preset_name;
  std::string preset_out = "config.json";
  bool list_presets = false;
  preset->add_option("--name", preset_name, "preset name");
  preset->add_option("--out", preset_out, "output file");
  preset->add_flag("--list", list_presets, "list available presets");

  CLI11_PARSE(app, argc, argv);

  return heod::guarded_command([&]() -> int {
    heod::CommandOptions opts{out_dir, workers};
    if (simulate->parsed())
      return heod::cmd_simulate(heod::load_config(config_path), opts);
    if (pathways->parsed())
      return heod::cmd_pathways(heod::load_config(config_path), opts);
    if (compare->parsed())
      return heod::cmd_compare(heod::load_config(config_path), opts);
    if (validate->parsed())
      return heod::cmd_validate_encoding(heod::load_config(config_path), opts);
    if (preset->parsed()) {
      if (list_presets) {
        for (const auto& name : heod::preset_names()) std::cout << name << "\n";
        return 0;
      }
      if (preset_name.empty())
        throw heod::config_error("preset requires --name or --list");
      const auto cfg = heod::preset_config(preset_name);
      auto out = heod::open_output(preset_out);
      out << heod::config_to_json(cfg).dump(2) << '\n';
      std::cout << "wrote " << preset_out << "\n";
      return 0;
    }
    return 2;
  });
}
