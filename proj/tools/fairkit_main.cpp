#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "fairkit/config.hpp"
#include "fairkit/pipeline.hpp"
#include "vendor/CLI11.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "path to the run config")->required();
  cmd->add_option("--out-dir", args.out_dir, "directory for all output files");
  cmd->add_option("--seed", args.seed, "override the [run] seed");
  cmd->add_flag("--verbose", args.verbose, "print stage progress");
}

int run_command(const CommonArgs& args, bool sweep) {
  fairkit::Config config;
  try {
    config = fairkit::Config::load(args.config_path);
  } catch (const fairkit::Error& e) {
    std::cerr << "{\"error\":\"" << fairkit::errc_name(e.code()) << "\",\"message\":\""
              << e.what() << "\"}\n";
    return fairkit::kExitConfigError;
  }
  fairkit::PipelineOptions options;
  options.out_dir = args.out_dir;
  options.seed_override = args.seed;
  options.verbose = args.verbose;
  return sweep ? fairkit::compare_interventions(config, options)
               : fairkit::run_pipeline(config, options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness intervention pipeline"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "execute one pipeline config");
  add_common(run, run_args);

  CommonArgs compare_args;
  CLI::App* compare =
      app.add_subcommand("compare", "run every [sweep] stack and write comparison.csv");
  add_common(compare, compare_args);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return run_command(run_args, false);
  return run_command(compare_args, true);
}
