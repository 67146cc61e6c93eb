#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regioncluster/clustering.hpp"
#include "regioncluster/corpus.hpp"

namespace regioncluster {

// Chance-corrected agreement of two labelings of the same items, from their
// contingency table. Two partitions with a zero correction denominator (both
// all-in-one or both all-singletons) are identical and score 1.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

// Province of each assigned region as an integer key. Regions without a
// province are their own single-region province.
std::vector<int> province_keys(const ClusterAssignment& assignment, const RegionCatalog& catalog);

struct ProvinceAgreement {
  double purity = 0.0;
  double adjusted_rand = 0.0;
};

ProvinceAgreement province_agreement(const ClusterAssignment& assignment, const RegionCatalog& catalog);

struct CoherenceResult {
  double value = 0.0;
  std::vector<std::string> excluded;  // regions without coordinates
};

// Fraction of (region, neighbor) pairs sharing a cluster, over each region's
// m nearest regions by great-circle distance (ties by region_id).
CoherenceResult neighbor_coherence(const ClusterAssignment& assignment, const RegionCatalog& catalog,
                                   std::size_t m);

struct Baseline {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

// Neighbor coherence under n_shuffles random label permutations. Shuffle s
// uses an mt19937_64 seeded with seed + s.
Baseline coherence_baseline(const ClusterAssignment& assignment, const RegionCatalog& catalog, std::size_t m,
                            std::size_t n_shuffles, std::uint64_t seed);

struct ClusterSummary {
  int label = 0;
  std::size_t size = 0;
  std::string dominant_province;  // ties: lexicographically smallest
  double dominant_share = 0.0;
};

struct EvaluationReport {
  double province_purity = 0.0;
  double adjusted_rand_vs_provinces = 0.0;
  double neighbor_coherence = 0.0;
  double coherence_baseline_mean = 0.0;
  double coherence_baseline_std = 0.0;
  std::size_t neighbors = 0;
  std::size_t shuffles = 0;
  std::vector<std::string> coherence_excluded;
  std::optional<double> adjusted_rand_vs_ground_truth;
  std::vector<ClusterSummary> per_cluster;
};

struct EvaluationConfig {
  std::size_t neighbors = 5;
  std::size_t shuffles = 1000;
  std::uint64_t seed = 42;
};

// `ground_truth`, when given, is compared on the regions both assignments share.
EvaluationReport evaluate(const ClusterAssignment& assignment, const RegionCatalog& catalog,
                          const EvaluationConfig& cfg, const ClusterAssignment* ground_truth = nullptr);

// Parameters of the planted-partition corpus generator.
struct SyntheticSpec {
  std::size_t n_regions = 336;
  std::size_t n_provinces = 30;
  std::size_t n_planted_clusters = 17;
  std::size_t activities_per_cluster = 3;
  std::size_t n_global_activities = 20;
  double signature_strength = 0.3;
  std::int64_t players_min = 5000;
  std::int64_t players_max = 15000;
  std::size_t n_excluded = 0;  // regions flagged included=false, chosen at random
  std::uint64_t seed = 42;

  void validate() const;  // throws ArgumentError
};

struct SyntheticCorpus {
  CountMatrix matrix;
  RegionCatalog regions;
  ActivityCatalog activities;
  ClusterAssignment ground_truth;  // all regions, excluded ones included
};

// Provinces are compact blocks on a grid of region points; each planted
// cluster owns a run of neighboring provinces. Every region's players are
// drawn one by one: with probability signature_strength from its cluster's
// signature activities, otherwise from the global activities, each pool with
// fixed random weights.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

}  // namespace regioncluster
