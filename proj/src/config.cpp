#include "regioncluster/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "regioncluster/error.hpp"

namespace regioncluster {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
    throw ArgumentError("setting '" + key + "': '" + value + "' is not a valid number");
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(parse_number<std::uint64_t>(key, value));
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ArgumentError("setting '" + key + "': expected true or false, got '" + value + "'");
}

std::string resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_absolute() || value.empty()) return value;
  return (base / p).lexically_normal().string();
}

}  // namespace

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(path, number, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    if (key.empty()) throw ParseError(path, number, "empty key");
    if (!out.emplace(key, trim(text.substr(eq + 1))).second) throw ParseError(path, number, "duplicate key '" + key + "'");
  }
  return out;
}

void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "regions") cfg.regions = value;
  else if (key == "activities") cfg.activities = value;
  else if (key == "counts") cfg.counts = value;
  else if (key == "totals") cfg.totals = value.empty() ? std::nullopt : std::optional<std::string>(value);
  else if (key == "complete") cfg.complete = parse_flag(key, value);
  else if (key == "ground_truth") cfg.ground_truth = value.empty() ? std::nullopt : std::optional<std::string>(value);
  else if (key == "top_small_k") cfg.selection.top_small_k = parse_number<int>(key, value);
  else if (key == "top_large_k") cfg.selection.top_large_k = parse_number<int>(key, value);
  else if (key == "large_share_min") cfg.selection.large_share_min = parse_number<double>(key, value);
  else if (key == "small_share_max") cfg.selection.small_share_max = parse_number<double>(key, value);
  else if (key == "corr_threshold") cfg.selection.corr_threshold = parse_number<double>(key, value);
  else if (key == "share_scope") {
    if (value == "included") cfg.share_scope = ShareScope::included;
    else if (value == "all") cfg.share_scope = ShareScope::all;
    else throw ArgumentError("setting 'share_scope': expected included or all, got '" + value + "'");
  } else if (key == "measure") cfg.measure = parse_measure(value);
  else if (key == "k") {
    cfg.k = parse_number<int>(key, value);
    if (cfg.k < 1) throw ArgumentError("setting 'k' must be at least 1");
  } else if (key == "neighbors") cfg.neighbors = parse_count(key, value);
  else if (key == "shuffles") cfg.shuffles = parse_count(key, value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") cfg.out = value;
  else if (key == "top") cfg.top = parse_count(key, value);
  else if (key == "dump_distances") cfg.dump_distances = parse_flag(key, value);
  else throw ArgumentError("unknown config key '" + key + "'");
}

void apply_setting(SyntheticSpec& spec, const std::string& key, const std::string& value) {
  if (key == "n_regions") spec.n_regions = parse_count(key, value);
  else if (key == "n_provinces") spec.n_provinces = parse_count(key, value);
  else if (key == "n_planted_clusters") spec.n_planted_clusters = parse_count(key, value);
  else if (key == "activities_per_cluster") spec.activities_per_cluster = parse_count(key, value);
  else if (key == "n_global_activities") spec.n_global_activities = parse_count(key, value);
  else if (key == "signature_strength") spec.signature_strength = parse_number<double>(key, value);
  else if (key == "players_min") spec.players_min = parse_number<std::int64_t>(key, value);
  else if (key == "players_max") spec.players_max = parse_number<std::int64_t>(key, value);
  else if (key == "n_excluded") spec.n_excluded = parse_count(key, value);
  else if (key == "seed") spec.seed = parse_number<std::uint64_t>(key, value);
  else throw ArgumentError("unknown synthetic spec key '" + key + "'");
}

PipelineConfig load_config(const std::string& path) {
  PipelineConfig cfg;
  const auto base = std::filesystem::path(path).parent_path();
  for (const auto& [key, value] : read_key_values(path)) {
    const bool is_path = key == "regions" || key == "activities" || key == "counts" || key == "totals" ||
                         key == "ground_truth" || key == "out";
    apply_setting(cfg, key, is_path ? resolve(base, value) : value);
  }
  return cfg;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  SyntheticSpec spec;
  for (const auto& [key, value] : read_key_values(path)) apply_setting(spec, key, value);
  return spec;
}

std::string to_config_text(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "regions = " << cfg.regions << "\n";
  out << "activities = " << cfg.activities << "\n";
  out << "counts = " << cfg.counts << "\n";
  if (cfg.totals) out << "totals = " << *cfg.totals << "\n";
  out << "complete = " << (cfg.complete ? "true" : "false") << "\n";
  if (cfg.ground_truth) out << "ground_truth = " << *cfg.ground_truth << "\n";
  out << "top_small_k = " << cfg.selection.top_small_k << "\n";
  out << "top_large_k = " << cfg.selection.top_large_k << "\n";
  out << "large_share_min = " << cfg.selection.large_share_min << "\n";
  out << "small_share_max = " << cfg.selection.small_share_max << "\n";
  out << "corr_threshold = " << cfg.selection.corr_threshold << "\n";
  out << "share_scope = " << (cfg.share_scope == ShareScope::included ? "included" : "all") << "\n";
  out << "measure = " << to_string(cfg.measure) << "\n";
  out << "k = " << cfg.k << "\n";
  out << "neighbors = " << cfg.neighbors << "\n";
  out << "shuffles = " << cfg.shuffles << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

}  // namespace regioncluster
