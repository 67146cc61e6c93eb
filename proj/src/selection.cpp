#include "regioncluster/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "regioncluster/error.hpp"
#include "regioncluster/kernels.hpp"

namespace regioncluster {

void SelectionConfig::validate() const {
  if (top_small_k <= 0 || top_small_k > top_large_k)
    throw ArgumentError("selection needs 0 < top_small_k <= top_large_k");
  if (large_share_min < 0.0 || large_share_min > 1.0) throw ArgumentError("large_share_min must lie in [0, 1]");
  if (small_share_max < 0.0 || small_share_max > 1.0) throw ArgumentError("small_share_max must lie in [0, 1]");
  if (corr_threshold < -1.0 || corr_threshold > 1.0) throw ArgumentError("corr_threshold must lie in [-1, 1]");
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::regional: return "regional";
    case Classification::excluded_diffuse: return "excluded_diffuse";
    case Classification::excluded_concentrated: return "excluded_concentrated";
    case Classification::excluded_empty: return "excluded_empty";
  }
  return "unknown";
}

std::size_t SelectionReport::count(Classification c) const {
  return static_cast<std::size_t>(
      std::count_if(profiles.begin(), profiles.end(), [c](const ActivityProfile& p) { return p.classification == c; }));
}

std::optional<double> top_share(std::span<const Count> counts, int k) {
  if (k <= 0) throw ArgumentError("top_share needs k >= 1, got " + std::to_string(k));
  const Count total = std::accumulate(counts.begin(), counts.end(), Count{0});
  if (total == 0) return std::nullopt;
  if (static_cast<std::size_t>(k) >= counts.size()) return 1.0;

  std::vector<Count> sorted(counts.begin(), counts.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(), std::greater<>());
  const Count top = std::accumulate(sorted.begin(), sorted.begin() + k, Count{0});
  return static_cast<double>(top) / static_cast<double>(total);
}

Classification classify_activity(std::optional<double> top_small_share, std::optional<double> top_large_share,
                                 const SelectionConfig& cfg) {
  if (!top_small_share || !top_large_share) return Classification::excluded_empty;
  if (!(*top_small_share < cfg.small_share_max)) return Classification::excluded_concentrated;
  if (!(*top_large_share > cfg.large_share_min)) return Classification::excluded_diffuse;
  return Classification::regional;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ArgumentError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()) + ")");
  if (x.size() < 2) throw ArgumentError("pearson needs at least 2 observations");

  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SelectionReport select_activities(const CountMatrix& share_matrix, const CountMatrix& corr_matrix,
                                  const SelectionConfig& cfg) {
  cfg.validate();
  if (share_matrix.activities() != corr_matrix.activities())
    throw ArgumentError("share and correlation matrices carry different activities");

  SelectionReport report;
  const std::size_t m = share_matrix.n_activities();
  report.profiles.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    const auto col = share_matrix.column(a);
    ActivityProfile& p = report.profiles[a];
    p.activity_id = share_matrix.activities()[a];
    p.national_total = std::accumulate(col.begin(), col.end(), Count{0});
    p.top_small_share = top_share(col, cfg.top_small_k);
    p.top_large_share = top_share(col, cfg.top_large_k);
    p.classification = classify_activity(p.top_small_share, p.top_large_share, cfg);
  }

  std::vector<std::size_t> regional;
  for (std::size_t a = 0; a < m; ++a)
    if (report.profiles[a].classification == Classification::regional) regional.push_back(a);
  std::sort(regional.begin(), regional.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = report.profiles[a];
    const auto& pb = report.profiles[b];
    if (pa.national_total != pb.national_total) return pa.national_total > pb.national_total;
    return pa.activity_id < pb.activity_id;
  });

  // Correlations among the regional columns only.
  const std::size_t n = corr_matrix.n_regions();
  const std::size_t c = regional.size();
  std::vector<Count> sub(n * c);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < c; ++j) sub[r * c + j] = corr_matrix.at(r, regional[j]);
  const auto corr = kernels::parallel::column_correlations(sub, n, c);

  const auto dedup = dedup_by_correlation(
      c, [&](std::size_t i, std::size_t j) { return corr[i * c + j]; }, cfg.corr_threshold);
  for (std::size_t pos : dedup.kept) report.kept.push_back(share_matrix.activities()[regional[pos]]);
  for (const auto& d : dedup.dropped) {
    report.dropped_correlated.push_back(
        {share_matrix.activities()[regional[d.dropped]], share_matrix.activities()[regional[d.blocker]], d.r});
  }
  return report;
}

}  // namespace regioncluster
