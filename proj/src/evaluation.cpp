#include "regioncluster/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "regioncluster/error.hpp"
#include "regioncluster/kernels.hpp"
#include "regioncluster/random.hpp"

namespace regioncluster {

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

std::vector<int> dense_keys(std::span<const int> labels) {
  std::unordered_map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(ids.emplace(l, static_cast<int>(ids.size())).first->second);
  return out;
}

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ArgumentError("adjusted_rand_index: labelings differ in length");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;

  const auto ka = dense_keys(a);
  const auto kb = dense_keys(b);
  const int ra = *std::max_element(ka.begin(), ka.end()) + 1;
  const int rb = *std::max_element(kb.begin(), kb.end()) + 1;
  std::vector<double> table(static_cast<std::size_t>(ra) * rb, 0.0);
  std::vector<double> rows(ra, 0.0);
  std::vector<double> cols(rb, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[static_cast<std::size_t>(ka[i]) * rb + kb[i]] += 1.0;
    rows[ka[i]] += 1.0;
    cols[kb[i]] += 1.0;
  }
  double index = 0.0;
  for (double c : table) index += choose2(c);
  double sum_rows = 0.0;
  double sum_cols = 0.0;
  for (double r : rows) sum_rows += choose2(r);
  for (double c : cols) sum_cols += choose2(c);

  const double expected = sum_rows * sum_cols / choose2(n);
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

std::vector<int> province_keys(const ClusterAssignment& assignment, const RegionCatalog& catalog) {
  std::map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(assignment.regions.size());
  for (const auto& id : assignment.regions) {
    const RegionMeta& meta = catalog.at(id);
    // '\x01' cannot start a province read from CSV text, so keys never collide.
    const std::string key = meta.province ? *meta.province : "\x01" + id;
    out.push_back(ids.emplace(key, static_cast<int>(ids.size())).first->second);
  }
  return out;
}

ProvinceAgreement province_agreement(const ClusterAssignment& assignment, const RegionCatalog& catalog) {
  const auto provinces = province_keys(assignment, catalog);
  ProvinceAgreement out;
  if (assignment.regions.empty()) return out;

  std::map<std::pair<int, int>, std::size_t> table;
  for (std::size_t i = 0; i < provinces.size(); ++i) ++table[{assignment.labels[i], provinces[i]}];
  std::map<int, std::size_t> best;
  for (const auto& [key, count] : table) best[key.first] = std::max(best[key.first], count);
  std::size_t hits = 0;
  for (const auto& [_, count] : best) hits += count;

  out.purity = static_cast<double>(hits) / static_cast<double>(assignment.regions.size());
  out.adjusted_rand = adjusted_rand_index(assignment.labels, provinces);
  return out;
}

namespace {

struct GeoSubset {
  std::vector<std::size_t> rows;  // indices into assignment.regions
  std::vector<kernels::GeoPoint> points;
  std::vector<std::size_t> rank;  // region_id order, for tie-breaking
  std::vector<int> labels;
  std::vector<std::string> excluded;
};

GeoSubset geo_subset(const ClusterAssignment& assignment, const RegionCatalog& catalog, std::size_t m) {
  if (m < 1) throw ArgumentError("neighbor count must be at least 1");
  GeoSubset s;
  for (std::size_t i = 0; i < assignment.regions.size(); ++i) {
    const RegionMeta& meta = catalog.at(assignment.regions[i]);
    if (!meta.has_coordinates()) {
      s.excluded.push_back(meta.region_id);
      continue;
    }
    s.rows.push_back(i);
    s.points.push_back({*meta.latitude, *meta.longitude});
    s.labels.push_back(assignment.labels[i]);
  }
  if (s.rows.size() < m + 1) {
    throw ArgumentError("neighbor coherence with m = " + std::to_string(m) + " needs at least " +
                        std::to_string(m + 1) + " regions with coordinates, got " + std::to_string(s.rows.size()));
  }
  std::vector<std::size_t> order(s.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return assignment.regions[s.rows[a]] < assignment.regions[s.rows[b]];
  });
  s.rank.resize(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) s.rank[order[r]] = r;
  return s;
}

}  // namespace

CoherenceResult neighbor_coherence(const ClusterAssignment& assignment, const RegionCatalog& catalog,
                                   std::size_t m) {
  auto s = geo_subset(assignment, catalog, m);
  const auto neighbors = kernels::parallel::nearest_neighbors(s.points, s.rank, m);
  return {kernels::coherence(neighbors, s.labels), std::move(s.excluded)};
}

Baseline coherence_baseline(const ClusterAssignment& assignment, const RegionCatalog& catalog, std::size_t m,
                            std::size_t n_shuffles, std::uint64_t seed) {
  if (n_shuffles < 2) throw ArgumentError("coherence baseline needs at least 2 shuffles");
  auto s = geo_subset(assignment, catalog, m);
  const auto neighbors = kernels::parallel::nearest_neighbors(s.points, s.rank, m);
  const auto values = kernels::parallel::shuffled_coherence(neighbors, s.labels, n_shuffles, seed);

  Baseline b;
  b.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - b.mean) * (v - b.mean);
  b.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return b;
}

EvaluationReport evaluate(const ClusterAssignment& assignment, const RegionCatalog& catalog,
                          const EvaluationConfig& cfg, const ClusterAssignment* ground_truth) {
  EvaluationReport report;
  const auto agreement = province_agreement(assignment, catalog);
  report.province_purity = agreement.purity;
  report.adjusted_rand_vs_provinces = agreement.adjusted_rand;

  auto coherence = neighbor_coherence(assignment, catalog, cfg.neighbors);
  report.neighbor_coherence = coherence.value;
  report.coherence_excluded = std::move(coherence.excluded);
  const auto baseline = coherence_baseline(assignment, catalog, cfg.neighbors, cfg.shuffles, cfg.seed);
  report.coherence_baseline_mean = baseline.mean;
  report.coherence_baseline_std = baseline.std;
  report.neighbors = cfg.neighbors;
  report.shuffles = cfg.shuffles;

  if (ground_truth) {
    std::unordered_map<std::string, int> truth;
    for (std::size_t i = 0; i < ground_truth->regions.size(); ++i)
      truth.emplace(ground_truth->regions[i], ground_truth->labels[i]);
    std::vector<int> found;
    std::vector<int> expected;
    for (std::size_t i = 0; i < assignment.regions.size(); ++i) {
      auto it = truth.find(assignment.regions[i]);
      if (it == truth.end()) continue;
      found.push_back(assignment.labels[i]);
      expected.push_back(it->second);
    }
    report.adjusted_rand_vs_ground_truth = adjusted_rand_index(found, expected);
  }

  std::vector<std::map<std::string, std::size_t>> by_cluster(static_cast<std::size_t>(assignment.k));
  for (std::size_t i = 0; i < assignment.regions.size(); ++i) {
    const RegionMeta& meta = catalog.at(assignment.regions[i]);
    ++by_cluster[static_cast<std::size_t>(assignment.labels[i] - 1)][meta.province.value_or(meta.region_id)];
  }
  for (std::size_t c = 0; c < by_cluster.size(); ++c) {
    ClusterSummary summary;
    summary.label = static_cast<int>(c + 1);
    std::size_t best = 0;
    for (const auto& [province, count] : by_cluster[c]) {
      summary.size += count;
      if (count > best) {
        best = count;
        summary.dominant_province = province;
      }
    }
    summary.dominant_share = summary.size ? static_cast<double>(best) / static_cast<double>(summary.size) : 0.0;
    report.per_cluster.push_back(std::move(summary));
  }
  return report;
}

void SyntheticSpec::validate() const {
  if (n_regions < 1) throw ArgumentError("synthetic spec: n_regions must be positive");
  if (n_planted_clusters < 1) throw ArgumentError("synthetic spec: n_planted_clusters must be positive");
  if (n_planted_clusters > n_provinces)
    throw ArgumentError("synthetic spec: n_planted_clusters (" + std::to_string(n_planted_clusters) +
                        ") exceeds n_provinces (" + std::to_string(n_provinces) + ")");
  if (n_provinces > n_regions)
    throw ArgumentError("synthetic spec: n_provinces (" + std::to_string(n_provinces) + ") exceeds n_regions (" +
                        std::to_string(n_regions) + ")");
  if (!(signature_strength > 0.0 && signature_strength < 1.0))
    throw ArgumentError("synthetic spec: signature_strength must lie in (0, 1)");
  if (activities_per_cluster < 1) throw ArgumentError("synthetic spec: activities_per_cluster must be positive");
  if (n_global_activities < 1) throw ArgumentError("synthetic spec: n_global_activities must be positive");
  if (players_min < 0 || players_min > players_max)
    throw ArgumentError("synthetic spec: players range must satisfy 0 <= players_min <= players_max");
  if (n_excluded > n_regions) throw ArgumentError("synthetic spec: n_excluded exceeds n_regions");
}

namespace {

std::string padded(const std::string& prefix, std::size_t value, std::size_t count) {
  const std::size_t width = std::to_string(count).size();
  std::string digits = std::to_string(value);
  return prefix + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

// Cumulative weights 0.5 + U[0,1), normalized.
std::vector<double> random_cumulative(Rng& rng, std::size_t count) {
  std::vector<double> cum(count);
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sum += 0.5 + uniform01(rng);
    cum[i] = sum;
  }
  for (double& c : cum) c /= sum;
  return cum;
}

std::size_t draw(Rng& rng, const std::vector<double>& cum) {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  const std::size_t n = spec.n_regions;
  const std::size_t n_prov = spec.n_provinces;
  const std::size_t n_clusters = spec.n_planted_clusters;

  // Province sizes differ by at most one.
  std::vector<std::size_t> prov_size(n_prov, n / n_prov);
  for (std::size_t p = 0; p < n % n_prov; ++p) ++prov_size[p];
  const std::size_t block_cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_prov))));
  const std::size_t block_rows = (n_prov + block_cols - 1) / block_cols;
  const std::size_t width = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(prov_size[0]))));
  const std::size_t pitch = width + 1;  // one empty row/column between provinces
  const double step = std::min(0.25, 50.0 / static_cast<double>(std::max(block_rows, block_cols) * pitch));

  // Snake order over province blocks keeps each cluster's provinces adjacent.
  std::vector<std::size_t> snake;
  for (std::size_t br = 0; br < block_rows; ++br) {
    std::vector<std::size_t> row;
    for (std::size_t bc = 0; bc < block_cols; ++bc)
      if (br * block_cols + bc < n_prov) row.push_back(br * block_cols + bc);
    if (br % 2 == 1) std::reverse(row.begin(), row.end());
    snake.insert(snake.end(), row.begin(), row.end());
  }
  std::vector<std::size_t> cluster_of_province(n_prov);
  {
    std::size_t pos = 0;
    for (std::size_t c = 0; c < n_clusters; ++c) {
      const std::size_t take = n_prov / n_clusters + (c < n_prov % n_clusters ? 1 : 0);
      for (std::size_t t = 0; t < take; ++t) cluster_of_province[snake[pos++]] = c;
    }
  }

  std::vector<RegionMeta> regions;
  std::vector<std::size_t> region_cluster;
  regions.reserve(n);
  for (std::size_t p = 0; p < n_prov; ++p) {
    const std::size_t br = p / block_cols;
    const std::size_t bc = p % block_cols;
    for (std::size_t l = 0; l < prov_size[p]; ++l) {
      RegionMeta meta;
      const std::size_t index = regions.size() + 1;
      meta.region_id = padded("R", index, n);
      meta.name = "Region " + std::to_string(index);
      meta.province = padded("P", p + 1, n_prov);
      const double x = static_cast<double>(bc * pitch + l % width);
      const double y = static_cast<double>(br * pitch + l / width);
      meta.latitude = 20.0 + y * step;
      meta.longitude = 80.0 + x * step;
      regions.push_back(std::move(meta));
      region_cluster.push_back(cluster_of_province[p]);
    }
  }

  if (spec.n_excluded > 0) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    shuffle(rng, std::span<std::size_t>(idx));
    for (std::size_t i = 0; i < spec.n_excluded; ++i) regions[idx[i]].included = false;
  }

  const std::size_t n_sig = n_clusters * spec.activities_per_cluster;
  const std::size_t n_act = n_sig + spec.n_global_activities;
  std::vector<ActivityMeta> activities;
  activities.reserve(n_act);
  for (std::size_t c = 0; c < n_clusters; ++c) {
    for (std::size_t j = 0; j < spec.activities_per_cluster; ++j) {
      activities.push_back({padded("S", c + 1, n_clusters) + "_" + std::to_string(j + 1),
                            "Signature " + std::to_string(c + 1) + "." + std::to_string(j + 1)});
    }
  }
  for (std::size_t g = 0; g < spec.n_global_activities; ++g)
    activities.push_back({padded("G", g + 1, spec.n_global_activities), "Global " + std::to_string(g + 1)});

  std::vector<std::vector<double>> signature_cum(n_clusters);
  for (auto& cum : signature_cum) cum = random_cumulative(rng, spec.activities_per_cluster);
  const auto global_cum = random_cumulative(rng, spec.n_global_activities);

  std::vector<Count> counts(n * n_act, 0);
  std::vector<Count> totals(n, 0);
  const auto span = static_cast<std::uint64_t>(spec.players_max - spec.players_min) + 1;
  for (std::size_t r = 0; r < n; ++r) {
    const Count players = spec.players_min + static_cast<Count>(uniform_below(rng, span));
    Count* row = counts.data() + r * n_act;
    const std::size_t sig_base = region_cluster[r] * spec.activities_per_cluster;
    for (Count p = 0; p < players; ++p) {
      if (uniform01(rng) < spec.signature_strength) ++row[sig_base + draw(rng, signature_cum[region_cluster[r]])];
      else ++row[n_sig + draw(rng, global_cum)];
    }
    totals[r] = players;
    regions[r].population = players * static_cast<Count>(50 + uniform_below(rng, 100));
  }

  SyntheticCorpus out;
  std::vector<std::string> region_ids;
  std::vector<std::string> activity_ids;
  for (const auto& r : regions) region_ids.push_back(r.region_id);
  for (const auto& a : activities) activity_ids.push_back(a.activity_id);
  out.ground_truth = make_assignment(region_ids, region_cluster);
  out.matrix = CountMatrix(region_ids, std::move(activity_ids), std::move(counts), std::move(totals), true);
  out.regions = RegionCatalog(std::move(regions));
  out.activities = ActivityCatalog(std::move(activities));
  return out;
}

}  // namespace regioncluster
