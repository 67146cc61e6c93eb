#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regioncluster/corpus.hpp"

namespace regioncluster {

// Thresholds of the regional-activity rule. An activity is regional when the
// top `top_large_k` regions hold MORE than `large_share_min` of its players
// while the top `top_small_k` regions hold LESS than `small_share_max`.
struct SelectionConfig {
  int top_small_k = 5;
  int top_large_k = 20;
  double large_share_min = 0.50;
  double small_share_max = 0.70;
  double corr_threshold = 0.8;

  void validate() const;  // throws ArgumentError
};

enum class Classification { regional, excluded_diffuse, excluded_concentrated, excluded_empty };

std::string_view to_string(Classification c);

struct ActivityProfile {
  std::string activity_id;
  Count national_total = 0;
  std::optional<double> top_small_share;  // nullopt when the activity has no players
  std::optional<double> top_large_share;
  Classification classification = Classification::excluded_empty;
};

struct DroppedPair {
  std::string dropped_id;
  std::string kept_id;
  double r = 0.0;
};

struct SelectionReport {
  std::vector<std::string> kept;
  std::vector<ActivityProfile> profiles;  // matrix activity order
  std::vector<DroppedPair> dropped_correlated;

  std::size_t count(Classification c) const;
};

// Share of the total held by the k largest entries; nullopt when the total is 0.
std::optional<double> top_share(std::span<const Count> counts, int k);

Classification classify_activity(std::optional<double> top_small_share, std::optional<double> top_large_share,
                                 const SelectionConfig& cfg);

// Sample Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Greedy fold over `candidates` (already in priority order): a candidate is
// kept unless its correlation with an earlier kept candidate is strictly above
// `threshold`. `corr(i, j)` takes candidate positions and returns nullopt for
// undefined correlations, which never block.
struct DedupResult {
  std::vector<std::size_t> kept;  // candidate positions
  struct Drop {
    std::size_t dropped;
    std::size_t blocker;
    double r;
  };
  std::vector<Drop> dropped;
};

template <typename CorrFn>
DedupResult dedup_by_correlation(std::size_t n_candidates, CorrFn&& corr, double threshold) {
  DedupResult out;
  for (std::size_t c = 0; c < n_candidates; ++c) {
    bool blocked = false;
    for (std::size_t k : out.kept) {
      std::optional<double> r = corr(k, c);
      if (r && *r > threshold) {
        out.dropped.push_back({c, k, *r});
        blocked = true;
        break;
      }
    }
    if (!blocked) out.kept.push_back(c);
  }
  return out;
}

// Classifies every activity from `share_matrix` and deduplicates the regional
// ones by correlating raw counts across the rows of `corr_matrix`. Both
// matrices must carry the same activity columns.
SelectionReport select_activities(const CountMatrix& share_matrix, const CountMatrix& corr_matrix,
                                  const SelectionConfig& cfg);

inline SelectionReport select_activities(const CountMatrix& matrix, const SelectionConfig& cfg) {
  return select_activities(matrix, matrix, cfg);
}

}  // namespace regioncluster
