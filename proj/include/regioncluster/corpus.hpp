#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace regioncluster {

using Count = std::int64_t;

struct RegionMeta {
  std::string region_id;
  std::string name;
  std::optional<std::string> province;  // absent for province-level municipalities
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::int64_t population = 0;
  bool included = true;

  bool has_coordinates() const { return latitude.has_value() && longitude.has_value(); }
};

// Region metadata keyed by region_id. Construction validates the invariants
// (unique non-empty ids, coordinate ranges, non-negative population).
class RegionCatalog {
 public:
  RegionCatalog() = default;
  explicit RegionCatalog(std::vector<RegionMeta> entries);

  const std::vector<RegionMeta>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::optional<std::size_t> find(const std::string& region_id) const;
  const RegionMeta& at(const std::string& region_id) const;

 private:
  std::vector<RegionMeta> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ActivityMeta {
  std::string activity_id;
  std::string name;
};

class ActivityCatalog {
 public:
  ActivityCatalog() = default;
  explicit ActivityCatalog(std::vector<ActivityMeta> entries);

  const std::vector<ActivityMeta>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::optional<std::size_t> find(const std::string& activity_id) const;

 private:
  std::vector<ActivityMeta> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Dense region x activity table of player counts. `region_totals` holds each
// region's players over ALL activities of the source data, which exceeds the
// row sum when the matrix carries only a subset of activities. When
// `complete` is set the matrix covers every activity and totals >= row sums.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::vector<std::string> regions, std::vector<std::string> activities,
              std::vector<Count> counts, std::vector<Count> region_totals, bool complete);

  const std::vector<std::string>& regions() const { return regions_; }
  const std::vector<std::string>& activities() const { return activities_; }
  const std::vector<Count>& region_totals() const { return totals_; }
  bool complete() const { return complete_; }

  std::size_t n_regions() const { return regions_.size(); }
  std::size_t n_activities() const { return activities_.size(); }

  Count at(std::size_t r, std::size_t a) const { return counts_[r * activities_.size() + a]; }
  std::span<const Count> row(std::size_t r) const {
    return {counts_.data() + r * activities_.size(), activities_.size()};
  }
  std::vector<Count> column(std::size_t a) const;
  Count row_sum(std::size_t r) const;
  Count column_sum(std::size_t a) const;

  std::optional<std::size_t> region_index(const std::string& region_id) const;
  std::optional<std::size_t> activity_index(const std::string& activity_id) const;

  // Keeps only the listed row indices, in the given order.
  CountMatrix select_regions(std::span<const std::size_t> rows) const;

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::vector<std::string> regions_;
  std::vector<std::string> activities_;
  std::vector<Count> counts_;
  std::vector<Count> totals_;
  bool complete_ = false;
};

struct CorpusPaths {
  std::string counts;
  std::string regions;
  std::string activities;
  std::optional<std::string> totals;  // companion totals file, else a [totals] section in counts
  bool complete = true;
};

struct Corpus {
  CountMatrix matrix;
  RegionCatalog regions;
  ActivityCatalog activities;
  std::vector<std::string> warnings;
};

RegionCatalog load_regions(const std::string& path);
ActivityCatalog load_activities(const std::string& path);
Corpus load_corpus(const CorpusPaths& paths);

// Writes regions.csv, activities.csv and counts.csv (with its [totals]
// section) into `dir`. Every matrix cell is written, zeros included.
void write_corpus(const std::string& dir, const CountMatrix& matrix, const RegionCatalog& regions,
                  const ActivityCatalog& activities);

// Throws IntegrityError/ValidationError if the matrix references unknown ids,
// is ordered differently from the catalogs, or breaks a count invariant.
void validate(const CountMatrix& matrix, const RegionCatalog& regions,
              const ActivityCatalog& activities);

struct FilterResult {
  CountMatrix matrix;
  std::vector<std::string> removed;
  std::vector<std::string> warnings;
};

FilterResult filter_regions(const CountMatrix& matrix, const RegionCatalog& catalog);

struct RegionSummary {
  std::string region_id;
  Count players = 0;
  std::int64_t population = 0;
  std::optional<double> percent_of_population;  // players / population, as a fraction
  double share_of_national = 0.0;
};

// Sorted by players descending, ties by region_id ascending.
std::vector<RegionSummary> region_summaries(const CountMatrix& matrix, const RegionCatalog& catalog);

// Combined national share of the first `n` summaries.
double top_national_share(const std::vector<RegionSummary>& summaries, std::size_t n);

}  // namespace regioncluster
