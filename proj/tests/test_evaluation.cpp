#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "regioncluster/clustering.hpp"
#include "regioncluster/error.hpp"
#include "regioncluster/evaluation.hpp"

using namespace regioncluster;

namespace {

RegionCatalog grid_catalog(std::size_t side, double lat0, double lon0, double step) {
  std::vector<RegionMeta> entries;
  for (std::size_t y = 0; y < side; ++y)
    for (std::size_t x = 0; x < side; ++x) {
      RegionMeta m;
      m.region_id = "g" + std::to_string(y * side + x);
      m.name = m.region_id;
      m.province = "p" + std::to_string((y / 2) * side + x / 2);
      m.latitude = lat0 + step * static_cast<double>(y);
      m.longitude = lon0 + step * static_cast<double>(x);
      entries.push_back(m);
    }
  return RegionCatalog(entries);
}

ClusterAssignment assign(const RegionCatalog& catalog, const std::vector<int>& groups) {
  std::vector<std::string> ids;
  for (const auto& e : catalog.entries()) ids.push_back(e.region_id);
  return make_assignment(ids, {groups.begin(), groups.end()});
}

}  // namespace

TEST(AdjustedRand, MatchesPairCountingOnSmallPartitions) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto parts = oracle::set_partitions(n);
    for (const auto& p : parts)
      for (const auto& q : parts) {
        ASSERT_NEAR(adjusted_rand_index(p, q), oracle::pair_counting_ari(p, q), 1e-12);
      }
  }
}

TEST(AdjustedRand, KnownValues) {
  std::vector<int> a{1, 1, 2, 2, 3, 3};
  std::vector<int> b{5, 5, 9, 9, 7, 7};
  EXPECT_DOUBLE_EQ(adjusted_rand_index(a, b), 1.0);
  std::vector<int> one(6, 1);
  std::vector<int> many{1, 2, 3, 4, 5, 6};
  EXPECT_DOUBLE_EQ(adjusted_rand_index(one, many), 0.0);
  std::vector<int> p{1, 1, 1, 2, 2};
  std::vector<int> q{1, 1, 2, 2, 3};
  EXPECT_NEAR(adjusted_rand_index(p, q), oracle::pair_counting_ari(p, q), 1e-12);
  std::vector<int> shorter{1, 2};
  EXPECT_THROW(adjusted_rand_index(a, shorter), ArgumentError);
}

TEST(AdjustedRand, Symmetric) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<int> a(n), b(n);
    for (auto& v : a) v = static_cast<int>(rng() % 4);
    for (auto& v : b) v = static_cast<int>(rng() % 5);
    EXPECT_NEAR(adjusted_rand_index(a, b), adjusted_rand_index(b, a), 1e-14);
  }
}

TEST(ProvinceAgreement, PurityBounds) {
  const auto catalog = grid_catalog(6, 30, 100, 0.2);  // 9 provinces of 4
  std::vector<int> one(36, 0);
  const auto all = province_agreement(assign(catalog, one), catalog);
  EXPECT_NEAR(all.purity, 4.0 / 36.0, 1e-12);
  EXPECT_GE(all.purity, 1.0 / 9.0 - 1e-12);

  std::vector<int> singletons(36);
  for (int i = 0; i < 36; ++i) singletons[i] = i;
  EXPECT_DOUBLE_EQ(province_agreement(assign(catalog, singletons), catalog).purity, 1.0);

  std::vector<int> by_province;
  for (const auto& e : catalog.entries()) by_province.push_back(std::stoi(e.province->substr(1)));
  const auto exact = province_agreement(assign(catalog, by_province), catalog);
  EXPECT_DOUBLE_EQ(exact.purity, 1.0);
  EXPECT_DOUBLE_EQ(exact.adjusted_rand, 1.0);
}

TEST(ProvinceAgreement, MissingProvinceIsOwnKey) {
  std::vector<RegionMeta> entries(3);
  entries[0].region_id = "bj";
  entries[1].region_id = "tj";
  entries[2].region_id = "sjz";
  entries[2].province = "Hebei";
  const RegionCatalog catalog(entries);
  const auto a = make_assignment({"bj", "tj", "sjz"}, {0, 0, 0});
  const auto keys = province_keys(a, catalog);
  EXPECT_EQ(std::set<int>(keys.begin(), keys.end()).size(), 3u);
  EXPECT_NEAR(province_agreement(a, catalog).purity, 1.0 / 3.0, 1e-12);
}

TEST(NeighborCoherence, InvariantUnderRelabelAndTranslation) {
  // Random points on a one-degree patch; a regular grid has exact distance
  // ties that rounding breaks differently after moving it.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RegionMeta> here, there;
  for (int i = 0; i < 36; ++i) {
    RegionMeta m;
    m.region_id = "g" + std::to_string(i);
    m.latitude = 30 + u(rng);
    m.longitude = 100 + u(rng);
    here.push_back(m);
    m.latitude = *m.latitude + 0.5;
    m.longitude = *m.longitude - 140;
    there.push_back(m);
  }
  const RegionCatalog base(here), moved(there);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> g(36), relabeled(36);
    for (auto& v : g) v = static_cast<int>(rng() % 4);
    for (std::size_t i = 0; i < 36; ++i) relabeled[i] = 10 - g[i];
    const double c = neighbor_coherence(assign(base, g), base, 4).value;
    EXPECT_NEAR(neighbor_coherence(assign(base, relabeled), base, 4).value, c, 1e-12);
    EXPECT_NEAR(neighbor_coherence(assign(moved, g), moved, 4).value, c, 1e-12);
  }
}

TEST(NeighborCoherence, BlockLabelsScoreHigh) {
  const auto catalog = grid_catalog(6, 30, 100, 0.1);
  std::vector<int> halves;
  for (const auto& e : catalog.entries()) halves.push_back(*e.longitude < 100.25 ? 0 : 1);
  const double c = neighbor_coherence(assign(catalog, halves), catalog, 4).value;
  EXPECT_GT(c, 0.7);
  std::vector<int> one(36, 0);
  EXPECT_DOUBLE_EQ(neighbor_coherence(assign(catalog, one), catalog, 4).value, 1.0);
}

TEST(NeighborCoherence, RegionsWithoutCoordinatesExcluded) {
  auto entries = grid_catalog(3, 30, 100, 0.1).entries();
  entries[4].latitude.reset();
  entries[4].longitude.reset();
  const RegionCatalog catalog(entries);
  std::vector<int> g(9, 0);
  const auto res = neighbor_coherence(assign(catalog, g), catalog, 3);
  EXPECT_EQ(res.excluded, (std::vector<std::string>{"g4"}));
}

TEST(CoherenceBaseline, DeterministicAndSane) {
  const auto catalog = grid_catalog(8, 30, 100, 0.1);
  std::vector<int> quads;
  for (const auto& e : catalog.entries())
    quads.push_back((*e.latitude < 30.35 ? 0 : 2) + (*e.longitude < 100.35 ? 0 : 1));
  const auto a = assign(catalog, quads);
  const auto b1 = coherence_baseline(a, catalog, 5, 200, 7);
  const auto b2 = coherence_baseline(a, catalog, 5, 200, 7);
  EXPECT_EQ(b1.mean, b2.mean);
  EXPECT_EQ(b1.std, b2.std);
  // Four equal clusters: a random pair agrees with probability (16-1)/(64-1).
  EXPECT_NEAR(b1.mean, 15.0 / 63.0, 0.03);
  EXPECT_GT(b1.std, 0.0);
  EXPECT_THROW(coherence_baseline(a, catalog, 5, 1, 7), ArgumentError);
}

TEST(Evaluate, ReportsGroundTruthAgreement) {
  SyntheticSpec spec;
  spec.n_regions = 60;
  spec.n_provinces = 6;
  spec.n_planted_clusters = 3;
  const auto synth = generate_synthetic(spec);
  EvaluationConfig cfg;
  cfg.shuffles = 50;
  const auto report = evaluate(synth.ground_truth, synth.regions, cfg, &synth.ground_truth);
  ASSERT_TRUE(report.adjusted_rand_vs_ground_truth);
  EXPECT_DOUBLE_EQ(*report.adjusted_rand_vs_ground_truth, 1.0);
  EXPECT_EQ(report.per_cluster.size(), 3u);
  std::size_t total = 0;
  for (const auto& c : report.per_cluster) total += c.size;
  EXPECT_EQ(total, 60u);
  EXPECT_FALSE(evaluate(synth.ground_truth, synth.regions, cfg).adjusted_rand_vs_ground_truth);
}

TEST(Synthetic, ClustersAreUnionsOfProvinces) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SyntheticSpec spec;
    spec.seed = seed;
    const auto synth = generate_synthetic(spec);
    EXPECT_EQ(synth.matrix.n_regions(), 336u);
    EXPECT_EQ(synth.matrix.n_activities(), 17u * 3u + 20u);
    // Each province sits inside a single planted cluster.
    std::map<std::string, std::set<int>> clusters_of;
    for (std::size_t i = 0; i < synth.ground_truth.regions.size(); ++i)
      clusters_of[*synth.regions.at(synth.ground_truth.regions[i]).province].insert(synth.ground_truth.labels[i]);
    for (const auto& [province, labels] : clusters_of) EXPECT_EQ(labels.size(), 1u) << province;
    // Provinces refine the planted clusters, so scoring provinces against
    // the cluster labels gives purity 1.
    std::vector<RegionMeta> swapped = synth.regions.entries();
    for (auto& e : swapped) e.province = "c" + std::to_string(synth.ground_truth.label_of(e.region_id));
    std::vector<std::size_t> province_groups;
    for (const auto& id : synth.ground_truth.regions)
      province_groups.push_back(std::stoul(synth.regions.at(id).province->substr(1)));
    const auto by_province = make_assignment(synth.ground_truth.regions, province_groups);
    EXPECT_DOUBLE_EQ(province_agreement(by_province, RegionCatalog(swapped)).purity, 1.0);
    std::set<std::string> provinces;
    for (const auto& e : synth.regions.entries()) provinces.insert(*e.province);
    EXPECT_EQ(provinces.size(), 30u);
    EXPECT_EQ(synth.ground_truth.sizes().size(), 17u);
    for (std::size_t r = 0; r < synth.matrix.n_regions(); ++r) {
      EXPECT_GE(synth.matrix.row_sum(r), spec.players_min);
      EXPECT_LE(synth.matrix.row_sum(r), spec.players_max);
      EXPECT_EQ(synth.matrix.row_sum(r), synth.matrix.region_totals()[r]);
    }
  }
}

TEST(Synthetic, SameSeedSameCorpus) {
  SyntheticSpec spec;
  spec.n_excluded = 12;
  const auto a = generate_synthetic(spec);
  const auto b = generate_synthetic(spec);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.ground_truth.labels, b.ground_truth.labels);
  std::size_t excluded = 0;
  for (const auto& e : a.regions.entries()) excluded += e.included ? 0 : 1;
  EXPECT_EQ(excluded, 12u);
  spec.seed = 43;
  EXPECT_FALSE(generate_synthetic(spec).matrix == a.matrix);
}

TEST(Synthetic, RejectsImpossibleSpecs) {
  SyntheticSpec spec;
  spec.n_planted_clusters = 31;
  EXPECT_THROW(generate_synthetic(spec), ArgumentError);
  spec = {};
  spec.signature_strength = 1.5;
  EXPECT_THROW(generate_synthetic(spec), ArgumentError);
  spec = {};
  spec.players_min = 10;
  spec.players_max = 5;
  EXPECT_THROW(generate_synthetic(spec), ArgumentError);
  spec = {};
  spec.n_provinces = 400;
  EXPECT_THROW(generate_synthetic(spec), ArgumentError);
}
