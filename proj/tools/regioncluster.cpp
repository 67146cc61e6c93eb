// Command-line front end: validate | run | synth | summarize.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "regioncluster/config.hpp"
#include "regioncluster/error.hpp"
#include "regioncluster/pipeline.hpp"

using namespace regioncluster;

int main(int argc, char** argv) {
  CLI::App app{"Cluster regions by the regional character of their activity profiles"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> k;
  std::optional<std::string> measure;
  app.add_option("--config", config_path, "key = value pipeline config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--k", k, "number of clusters");
  app.add_option("--measure", measure, "phi_square or chi_square");

  auto* validate_cmd = app.add_subcommand("validate", "load the corpus and run all integrity checks");
  auto* run_cmd = app.add_subcommand("run", "run the full pipeline and write artifacts");
  auto* summarize_cmd = app.add_subcommand("summarize", "print the regions with the most players");
  std::optional<std::size_t> top;
  summarize_cmd->add_option("--top", top, "number of regions to print (default 20)");
  auto* synth_cmd = app.add_subcommand("synth", "write a planted-partition synthetic corpus");
  std::string spec_path;
  synth_cmd->add_option("spec", spec_path, "synthetic spec file (defaults apply when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (synth_cmd->parsed()) {
      SyntheticSpec spec = spec_path.empty() ? SyntheticSpec{} : load_synthetic_spec(spec_path);
      if (seed) spec.seed = *seed;
      return cmd_synth(spec, out_dir.value_or("synth"), std::cout, std::cerr);
    }

    if (config_path.empty()) {
      std::cerr << "error: --config is required for this command\n";
      return kExitInput;
    }
    PipelineConfig cfg = load_config(config_path);
    if (out_dir) cfg.out = *out_dir;
    if (seed) cfg.seed = *seed;
    if (k) apply_setting(cfg, "k", std::to_string(*k));
    if (measure) apply_setting(cfg, "measure", *measure);
    if (top) cfg.top = *top;

    if (validate_cmd->parsed()) return cmd_validate(cfg, std::cout, std::cerr);
    if (run_cmd->parsed()) return cmd_run(cfg, std::cout, std::cerr);
    if (summarize_cmd->parsed()) return cmd_summarize(cfg, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
