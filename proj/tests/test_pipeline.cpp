#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oracles.hpp"
#include "regioncluster/config.hpp"
#include "regioncluster/error.hpp"
#include "regioncluster/evaluation.hpp"
#include "regioncluster/pipeline.hpp"
#include "regioncluster/report.hpp"

using namespace regioncluster;
namespace fs = std::filesystem;

namespace {

const std::string kCli = REGIONCLUSTER_CLI;
const std::string kData = REGIONCLUSTER_TEST_DATA;

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(const std::string& args, const fs::path& work) {
  const auto out = work / "stdout.txt";
  const auto err = work / "stderr.txt";
  const std::string cmd = "'" + kCli + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, oracle::read_file(out), oracle::read_file(err)};
}

// Writes a synthetic corpus through the CLI and returns its config path.
fs::path synth_corpus(const fs::path& dir, const std::string& spec_text) {
  oracle::write_file(dir / "spec.txt", spec_text);
  const auto res = cli("synth '" + (dir / "spec.txt").string() + "' --out '" + (dir / "corpus").string() + "'", dir);
  EXPECT_EQ(res.status, 0) << res.err;
  return dir / "corpus" / "corpus.conf";
}

std::string small_spec(std::uint64_t seed = 42) {
  return "n_regions = 80\nn_provinces = 10\nn_planted_clusters = 4\nn_global_activities = 6\nseed = " +
         std::to_string(seed) + "\n";
}

}  // namespace

TEST(Cli, ValidateFullSizeFixture) {
  const auto dir = oracle::scratch_dir("cli_validate");
  const auto conf = synth_corpus(dir,
                                 "n_regions = 376\nn_planted_clusters = 17\nactivities_per_cluster = 3\n"
                                 "n_global_activities = 145\nn_excluded = 40\n");
  const auto res = cli("--config '" + conf.string() + "' validate", dir);
  EXPECT_EQ(res.status, 0) << res.err;
  EXPECT_NE(res.out.find("376 regions, 196 activities"), std::string::npos) << res.out;
  EXPECT_NE(res.out.find("40 region(s) flagged excluded, 336 remain"), std::string::npos) << res.out;
}

TEST(Cli, ValidateUnknownCityExitsTwo) {
  const auto dir = oracle::scratch_dir("cli_unknown");
  const auto conf = synth_corpus(dir, small_spec());
  const auto counts = dir / "corpus" / "counts.csv";
  auto text = oracle::read_file(counts);
  text.insert(text.find("[totals]"), "atlantis,G01,3\n");
  oracle::write_file(counts, text);
  const auto res = cli("--config '" + conf.string() + "' validate", dir);
  EXPECT_EQ(res.status, 2);
  EXPECT_NE(res.err.find("atlantis"), std::string::npos) << res.err;
}

TEST(Cli, ValidateMissingFileNamesIt) {
  const auto dir = oracle::scratch_dir("cli_missing");
  const auto conf = synth_corpus(dir, small_spec());
  fs::remove(dir / "corpus" / "activities.csv");
  const auto res = cli("--config '" + conf.string() + "' validate", dir);
  EXPECT_EQ(res.status, 2);
  EXPECT_NE(res.err.find("activities.csv"), std::string::npos) << res.err;
}

TEST(Cli, ValidateEmptyCountsWarns) {
  const auto dir = oracle::scratch_dir("cli_empty");
  const auto conf = synth_corpus(dir, small_spec());
  oracle::write_file(dir / "corpus" / "counts.csv", "region_id,activity_id,count\n");
  const auto res = cli("--config '" + conf.string() + "' validate", dir);
  EXPECT_EQ(res.status, 0) << res.err;
  EXPECT_NE(res.out.find("warning:"), std::string::npos) << res.out;
}

TEST(Cli, RunIsByteIdenticalAcrossReruns) {
  const auto dir = oracle::scratch_dir("cli_determinism");
  const auto conf = synth_corpus(dir, small_spec());
  const auto a = cli("--config '" + conf.string() + "' --k 4 --out '" + (dir / "a").string() + "' run", dir);
  const auto b = cli("--config '" + conf.string() + "' --k 4 --out '" + (dir / "b").string() + "' run", dir);
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(b.status, 0) << b.err;
  for (const char* name : {"assignments.csv", "dendrogram.nwk", "selection.json", "evaluation.json", "report.md",
                           "clusters.geojson", "dendrogram.svg", "map.svg"}) {
    const auto fa = oracle::read_file(dir / "a" / name);
    EXPECT_FALSE(fa.empty()) << name;
    EXPECT_EQ(fa, oracle::read_file(dir / "b" / name)) << name;
  }
}

TEST(Cli, RunRecoversPlantedClusters) {
  const auto dir = oracle::scratch_dir("cli_recover");
  const auto conf = synth_corpus(dir, small_spec());
  const auto res = cli("--config '" + conf.string() + "' --out '" + (dir / "out").string() + "' run", dir);
  ASSERT_EQ(res.status, 0) << res.err;
  const auto eval = nlohmann::json::parse(oracle::read_file(dir / "out" / "evaluation.json"));
  EXPECT_GE(eval["adjusted_rand_vs_ground_truth"].get<double>(), 0.9);
}

TEST(Cli, KOneGivesLargestProvinceShare) {
  const auto dir = oracle::scratch_dir("cli_k1");
  const auto conf = synth_corpus(dir, small_spec());
  const auto res =
      cli("--config '" + conf.string() + "' --k 1 --out '" + (dir / "out").string() + "' run", dir);
  ASSERT_EQ(res.status, 0) << res.err;
  const auto eval = nlohmann::json::parse(oracle::read_file(dir / "out" / "evaluation.json"));
  const auto cfg = load_config(conf.string());
  const Corpus corpus = load_corpus(cfg.corpus_paths());
  std::map<std::string, int> per_province;
  for (const auto& e : corpus.regions.entries()) ++per_province[*e.province];
  int largest = 0;
  for (const auto& [_, c] : per_province) largest = std::max(largest, c);
  EXPECT_NEAR(eval["province_purity"].get<double>(),
              static_cast<double>(largest) / static_cast<double>(corpus.regions.size()), 1e-12);
  const auto assignments = read_assignments((dir / "out" / "assignments.csv").string());
  for (int l : assignments.labels) EXPECT_EQ(l, 1);
}

TEST(Cli, FailedRunLeavesNoArtifacts) {
  const auto dir = oracle::scratch_dir("cli_fail");
  const auto conf = synth_corpus(dir, small_spec());
  const auto res =
      cli("--config '" + conf.string() + "' --k 500 --out '" + (dir / "out").string() + "' run", dir);
  EXPECT_EQ(res.status, 2);
  EXPECT_NE(res.err.find("stage cut"), std::string::npos) << res.err;
  if (fs::exists(dir / "out")) EXPECT_TRUE(fs::is_empty(dir / "out"));
}

TEST(Cli, GeoJsonStructure) {
  const auto dir = oracle::scratch_dir("cli_geojson");
  const auto conf = synth_corpus(dir, small_spec());
  ASSERT_EQ(cli("--config '" + conf.string() + "' --k 4 --out '" + (dir / "out").string() + "' run", dir).status, 0);
  const auto gj = nlohmann::json::parse(oracle::read_file(dir / "out" / "clusters.geojson"));
  EXPECT_EQ(gj["type"], "FeatureCollection");
  ASSERT_EQ(gj["features"].size(), 80u);
  for (const auto& f : gj["features"]) {
    EXPECT_EQ(f["type"], "Feature");
    EXPECT_EQ(f["geometry"]["type"], "Point");
    const auto& c = f["geometry"]["coordinates"];
    ASSERT_EQ(c.size(), 2u);
    EXPECT_GE(c[0].get<double>(), -180.0);
    EXPECT_LE(c[1].get<double>(), 90.0);
    EXPECT_TRUE(f["properties"]["region_id"].is_string());
    EXPECT_TRUE(f["properties"]["province"].is_string());
    const int k = f["properties"]["cluster"].get<int>();
    EXPECT_GE(k, 1);
    EXPECT_LE(k, 4);
  }
}

TEST(Cli, SynthRejectsMoreClustersThanProvinces) {
  const auto dir = oracle::scratch_dir("cli_bad_spec");
  oracle::write_file(dir / "spec.txt", "n_provinces = 5\nn_planted_clusters = 6\n");
  const auto res = cli("synth '" + (dir / "spec.txt").string() + "' --out '" + (dir / "c").string() + "'", dir);
  EXPECT_EQ(res.status, 2);
}

TEST(Cli, SynthIsDeterministic) {
  const auto dir = oracle::scratch_dir("cli_synth_det");
  synth_corpus(dir / "a", small_spec(7));
  synth_corpus(dir / "b", small_spec(7));
  for (const char* name : {"counts.csv", "regions.csv", "activities.csv", "ground_truth.csv", "corpus.conf"})
    EXPECT_EQ(oracle::read_file(dir / "a" / "corpus" / name), oracle::read_file(dir / "b" / "corpus" / name))
        << name;
}

TEST(Cli, SummarizeTopTwenty) {
  const auto dir = oracle::scratch_dir("cli_summarize");
  const auto conf = kData + "/top20/corpus.conf";
  const auto res = cli("--config '" + conf + "' summarize", dir);
  ASSERT_EQ(res.status, 0) << res.err;
  std::istringstream lines(res.out);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_NE(first.find("Beijing"), std::string::npos);
  EXPECT_NE(first.find("1.20%"), std::string::npos) << first;
  EXPECT_NE(res.out.find("All top 20"), std::string::npos);
  EXPECT_NE(res.out.find("32.89%"), std::string::npos);

  const auto all = cli("--config '" + conf + "' summarize --top 1000", dir);
  ASSERT_EQ(all.status, 0);
  EXPECT_NE(all.out.find("Other 100"), std::string::npos);
  EXPECT_NE(all.out.find("All top 120"), std::string::npos);
}

TEST(Cli, UnknownOptionExitsTwo) {
  const auto dir = oracle::scratch_dir("cli_badopt");
  EXPECT_EQ(cli("run --bogus", dir).status, 2);
  EXPECT_EQ(cli("", dir).status, 2);
}

TEST(Pipeline, NoSignalDoesNotCrash) {
  SyntheticSpec spec;
  spec.n_regions = 60;
  spec.n_provinces = 6;
  spec.n_planted_clusters = 3;
  spec.signature_strength = 1e-6;
  spec.n_global_activities = 1;
  auto synth = generate_synthetic(spec);
  PipelineConfig cfg;
  cfg.k = 3;
  cfg.shuffles = 20;
  const auto result = run_pipeline({synth.matrix, synth.regions, synth.activities, {}}, cfg, &synth.ground_truth);
  EXPECT_EQ(result.assignment.regions.size(), 60u);
  EXPECT_FALSE(result.warnings.empty());
}

TEST(Pipeline, RecoveryImprovesWithSignal) {
  double previous = -1.0;
  for (double strength : {0.02, 0.08, 0.3}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      SyntheticSpec spec;
      spec.n_regions = 120;
      spec.n_provinces = 12;
      spec.n_planted_clusters = 6;
      spec.signature_strength = strength;
      spec.seed = seed;
      auto synth = generate_synthetic(spec);
      PipelineConfig cfg;
      cfg.k = 6;
      cfg.shuffles = 2;
      const auto result = run_pipeline({synth.matrix, synth.regions, synth.activities, {}}, cfg, &synth.ground_truth);
      sum += *result.evaluation.adjusted_rand_vs_ground_truth;
    }
    const double mean = sum / 20.0;
    EXPECT_GE(mean, previous) << "strength " << strength;
    previous = mean;
  }
}

TEST(Config, ParsesAndRejects) {
  const auto dir = oracle::scratch_dir("config");
  oracle::write_file(dir / "a.conf", "# comment\nregions = r.csv\nk = 5\nmeasure = chi_square\n");
  const auto cfg = load_config((dir / "a.conf").string());
  EXPECT_EQ(cfg.k, 5);
  EXPECT_EQ(cfg.measure, Measure::chi_square);
  EXPECT_EQ(fs::path(cfg.regions), dir / "r.csv");
  oracle::write_file(dir / "b.conf", "k = 0\n");
  EXPECT_THROW(load_config((dir / "b.conf").string()), ArgumentError);
  oracle::write_file(dir / "c.conf", "k = 3\nk = 4\n");
  EXPECT_THROW(load_config((dir / "c.conf").string()), ParseError);
  oracle::write_file(dir / "d.conf", "colour = red\n");
  EXPECT_THROW(load_config((dir / "d.conf").string()), ArgumentError);
  oracle::write_file(dir / "e.conf", "no equals sign\n");
  EXPECT_THROW(load_config((dir / "e.conf").string()), ParseError);
}
