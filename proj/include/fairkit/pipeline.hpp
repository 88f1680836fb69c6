#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fairkit/config.hpp"

namespace fairkit {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes of the CLI and of run_pipeline/compare_interventions.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitStageFailure = 3;

struct PipelineOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  bool verbose = false;
};

// Executes the declared stages in order:
// ingest -> [preprocess] -> [train] -> [postprocess] -> metrics -> [audit]
// -> [simulate], writing report.json, decisions.csv, plan/map JSON, traces
// and a manifest sufficient to re-run the pipeline. Returns an exit code and,
// on failure, prints one machine-readable JSON line to stderr.
int run_pipeline(const Config& config, const PipelineOptions& options);

// Runs every intervention stack of the [sweep] section on the same data and
// seed and writes one comparison row per stack.
int compare_interventions(const Config& config, const PipelineOptions& options);

}  // namespace fairkit
