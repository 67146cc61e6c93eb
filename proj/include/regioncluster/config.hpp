#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "regioncluster/clustering.hpp"
#include "regioncluster/evaluation.hpp"
#include "regioncluster/selection.hpp"

namespace regioncluster {

// Which regions the top-k concentration shares are computed over.
enum class ShareScope { included, all };

struct PipelineConfig {
  std::string regions;
  std::string activities;
  std::string counts;
  std::optional<std::string> totals;
  bool complete = true;
  std::optional<std::string> ground_truth;

  SelectionConfig selection;
  ShareScope share_scope = ShareScope::included;
  Measure measure = Measure::phi_square;
  int k = 17;
  std::size_t neighbors = 5;
  std::size_t shuffles = 1000;
  std::uint64_t seed = 42;
  std::string out = "out";
  std::size_t top = 20;  // rows printed by `summarize`
  bool dump_distances = false;

  CorpusPaths corpus_paths() const { return {counts, regions, activities, totals, complete}; }
  EvaluationConfig evaluation() const { return {neighbors, shuffles, seed}; }
};

// `key = value` lines; '#' starts a comment line. Throws ParseError on a
// malformed line or a repeated key.
std::map<std::string, std::string> read_key_values(const std::string& path);

// Applies one key. Unknown keys and bad values throw ArgumentError.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);
void apply_setting(SyntheticSpec& spec, const std::string& key, const std::string& value);

// Relative input paths resolve against the config file's directory.
PipelineConfig load_config(const std::string& path);
SyntheticSpec load_synthetic_spec(const std::string& path);

std::string to_config_text(const PipelineConfig& cfg);

}  // namespace regioncluster
