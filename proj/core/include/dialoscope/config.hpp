#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dialoscope/distance.hpp"
#include "dialoscope/issue_query.hpp"
#include "dialoscope/nmf.hpp"
#include "dialoscope/notes.hpp"

namespace dialoscope {

/// Full pipeline configuration. Defaults encode the published defaults of
/// every analysis stage; the config file (INI-style `key = value` under
/// `[section]` headers, `#` comments) and CLI flags override them 1:1 via
/// `section.key` names.
struct PipelineConfig {
  struct Paths {
    std::filesystem::path notes_dir;
    std::filesystem::path corpus;
    std::filesystem::path embeddings;
    std::filesystem::path contextual_vectors;
    std::filesystem::path issues;
    std::filesystem::path labels;
    std::filesystem::path stopwords;
    std::filesystem::path allow_list;
    std::filesystem::path aliases;
    std::filesystem::path abbreviations;
    std::filesystem::path note_manifest;
    std::filesystem::path output_dir;
  } paths;

  struct Ingest {
    std::string filename_pattern = R"((\d{4})[-_](\d{1,2}))";
    bool strict = false;
    int tab_width = 4;
    std::string multi_party_separator = "+";
  } ingest;

  ExpandOptions query;  // base_sim 0.4, max_sim 0.6, overflow 1000, step 0.05
  NmfConfig nmf;        // alpha 0.1, l1_ratio 0.5, tol 1e-4, 10000 features, ...

  struct Distance {
    std::vector<std::string> parties;
    std::string reference = "average";  // or "baseline:<party>"
    bool show_baseline = true;
    PeriodGranularity period = PeriodGranularity::Year;
    double fraction = 0.10;
    int n_resamples = 100;
    std::uint64_t seed = 7;
    std::size_t chunk_limit = 512;
    bool weight_by_tokens = true;
  } distance;

  struct Stages {
    bool predefined = true;  // requires paths.issues
    bool topics = true;
    bool distances = true;   // requires distance.parties
    bool charts = true;
  } stages;

  NoteStyle note_style() const;
  ReferenceSpec reference_spec() const;
};

PipelineConfig default_config();

/// Parse a config file; unknown keys are an error.
PipelineConfig load_config(const std::filesystem::path& path);

/// Apply one `section.key=value` override (the CLI flag path).
void apply_override(PipelineConfig& config, const std::string& key, const std::string& value);

/// Flat `section.key -> value` view of a config; feeds the run manifest and
/// the parameter snapshot test.
std::map<std::string, std::string> config_snapshot(const PipelineConfig& config);

}  // namespace dialoscope
