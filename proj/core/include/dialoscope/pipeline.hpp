#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dialoscope/config.hpp"

namespace dialoscope {

struct StageStatus {
  std::string name;
  std::string status;  // complete | incomplete | skipped
};

struct RunResult {
  std::filesystem::path run_dir;
  std::filesystem::path manifest_path;
  std::vector<StageStatus> stages;
};

/// Run the full pipeline into config.paths.output_dir: cleaned corpus CSV,
/// expansion report, predefined-issue-augmented CSV, latent-topic artifacts,
/// distance and activity reports, SVG charts, and a manifest recording every
/// parameter and input/output hash. Reruns on identical inputs produce
/// byte-identical outputs (the manifest carries no timestamps). A stage
/// failure writes the manifest with that stage marked incomplete, then
/// rethrows with the stage name.
RunResult run_pipeline(const PipelineConfig& config);

/// FNV-1a 64 hash of a file's bytes, as a fixed-width hex string.
std::string file_hash(const std::filesystem::path& path);

}  // namespace dialoscope
