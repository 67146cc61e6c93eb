#include "regioncluster/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "regioncluster/error.hpp"
#include "regioncluster/report.hpp"

namespace regioncluster {

namespace fs = std::filesystem;

namespace {

template <typename F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.what(), true);
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), false);
  }
}

std::size_t count_zero_rows(const ProfileMatrix& profiles) {
  std::size_t zero = 0;
  for (std::size_t r = 0; r < profiles.n_regions(); ++r) {
    auto row = profiles.row(r);
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) ++zero;
  }
  return zero;
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw Error("no " + what + " file configured");
  if (!fs::is_regular_file(path)) throw Error("cannot open " + what + " file '" + path + "'");
}

Corpus ingest(const PipelineConfig& cfg) {
  require_file(cfg.regions, "regions");
  require_file(cfg.activities, "activities");
  require_file(cfg.counts, "counts");
  if (cfg.totals) require_file(*cfg.totals, "totals");
  Corpus corpus = load_corpus(cfg.corpus_paths());
  validate(corpus.matrix, corpus.regions, corpus.activities);
  return corpus;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  Corpus corpus = stage("ingest", [&] { return ingest(cfg); });
  std::optional<ClusterAssignment> truth;
  if (cfg.ground_truth) {
    truth = stage("ingest", [&] {
      require_file(*cfg.ground_truth, "ground truth");
      return read_assignments(*cfg.ground_truth);
    });
  }
  return run_pipeline(std::move(corpus), cfg, truth ? &*truth : nullptr);
}

PipelineResult run_pipeline(Corpus corpus, const PipelineConfig& cfg, const ClusterAssignment* ground_truth) {
  PipelineResult result;
  result.corpus = std::move(corpus);
  result.warnings = result.corpus.warnings;

  result.filtered = stage("filter", [&] { return filter_regions(result.corpus.matrix, result.corpus.regions); });
  result.warnings.insert(result.warnings.end(), result.filtered.warnings.begin(), result.filtered.warnings.end());

  result.selection = stage("select", [&] {
    const CountMatrix& shares = cfg.share_scope == ShareScope::all ? result.corpus.matrix : result.filtered.matrix;
    if (result.filtered.matrix.n_regions() == 0) throw ArgumentError("no regions left after exclusion");
    auto report = select_activities(shares, result.filtered.matrix, cfg.selection);
    if (report.kept.empty()) {
      const CountMatrix& m = result.filtered.matrix;
      for (std::size_t a = 0; a < m.n_activities(); ++a)
        if (m.column_sum(a) > 0) report.kept.push_back(m.activities()[a]);
      result.warnings.push_back("no activity passed selection; clustering on all " +
                                std::to_string(report.kept.size()) + " played activities");
    }
    if (report.kept.empty()) throw ArgumentError("no activity has any players");
    return report;
  });

  result.profiles = stage("profile", [&] { return build_profiles(result.filtered.matrix, result.selection.kept); });
  if (!result.profiles.dropped.empty()) {
    result.warnings.push_back(std::to_string(result.profiles.dropped.size()) +
                              " region(s) with zero total players dropped before clustering");
  }

  result.distances = stage("distance", [&] {
    const std::size_t zero = count_zero_rows(result.profiles.profiles);
    ZeroRows policy = ZeroRows::error;
    if (zero >= 2) {
      result.warnings.push_back(std::to_string(zero) +
                                " regions have no players in any kept activity; their mutual distance is 0");
      policy = ZeroRows::identical;
    }
    return distance_matrix(result.profiles.profiles, cfg.measure, policy);
  });

  result.tree = stage("upgma", [&] { return upgma(result.distances); });
  result.assignment = stage("cut", [&] { return cut(result.tree, cfg.k); });

  result.evaluation = stage(
      "evaluate", [&] { return evaluate(result.assignment, result.corpus.regions, cfg.evaluation(), ground_truth); });
  return result;
}

std::map<std::string, std::string> render_artifacts(const PipelineResult& result, const PipelineConfig& cfg) {
  RunSummary run;
  run.catalog_regions = result.corpus.regions.size();
  run.catalog_activities = result.corpus.activities.size();
  run.matrix_regions = result.corpus.matrix.n_regions();
  run.matrix_activities = result.corpus.matrix.n_activities();
  run.removed_regions = result.filtered.removed;
  run.dropped_zero_total = result.profiles.dropped;
  run.warnings = result.warnings;
  run.measure = std::string(to_string(cfg.measure));
  run.k = cfg.k;

  std::map<std::string, std::string> files;
  files["assignments.csv"] = assignments_csv(result.assignment);
  files["dendrogram.nwk"] = export_newick(result.tree) + "\n";
  files["selection.json"] = selection_json(result.selection);
  files["evaluation.json"] = evaluation_json(result.evaluation);
  files["report.md"] = report_markdown(run, result.selection, result.evaluation);
  files["clusters.geojson"] = clusters_geojson(result.assignment, result.corpus.regions);
  files["dendrogram.svg"] = dendrogram_svg(result.tree, result.assignment);
  files["map.svg"] = map_svg(result.assignment, result.corpus.regions, result.tree);
  if (cfg.dump_distances) files["distances.csv"] = distances_csv(result.distances);
  return files;
}

void write_artifacts(const std::string& dir, const std::map<std::string, std::string>& files) {
  fs::create_directories(dir);
  std::vector<fs::path> temps;
  std::vector<fs::path> placed;
  try {
    for (const auto& [name, content] : files) {
      const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw Error("failed writing '" + tmp.string() + "'");
    }
    std::size_t i = 0;
    for (const auto& [name, _] : files) {
      const fs::path target = fs::path(dir) / name;
      fs::rename(temps[i++], target);
      placed.push_back(target);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : temps) fs::remove(p, ec);
    for (const auto& p : placed) fs::remove(p, ec);
    throw;
  }
}

int cmd_validate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Corpus corpus = ingest(cfg);
    out << "regions:    " << cfg.regions << ": " << corpus.regions.size() << " entries\n";
    out << "activities: " << cfg.activities << ": " << corpus.activities.size() << " entries\n";
    out << "counts:     " << cfg.counts << ": " << corpus.matrix.n_regions() << " x " << corpus.matrix.n_activities()
        << " matrix (" << (corpus.matrix.complete() ? "complete" : "subset") << ")\n";
    const auto filtered = filter_regions(corpus.matrix, corpus.regions);
    out << "exclusion:  " << filtered.removed.size() << " region(s) flagged excluded, " << filtered.matrix.n_regions()
        << " remain\n";
    for (const auto& w : corpus.warnings) out << "warning: " << w << "\n";
    for (const auto& w : filtered.warnings) out << "warning: " << w << "\n";
    out << "OK: " << corpus.regions.size() << " regions, " << corpus.activities.size() << " activities\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "validation failed: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_run(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const PipelineResult result = run_pipeline(cfg);
    const auto files = stage("write", [&] { return render_artifacts(result, cfg); });
    stage("write", [&] {
      write_artifacts(cfg.out, files);
      return 0;
    });
    for (const auto& w : result.warnings) err << "warning: " << w << "\n";
    out << "clustered " << result.assignment.regions.size() << " regions on " << result.selection.kept.size()
        << " activities into " << result.assignment.k << " clusters\n";
    out << evaluation_text(result.evaluation);
    out << "artifacts written to " << cfg.out << "\n";
    return kExitOk;
  } catch (const StageError& e) {
    err << "error in stage " << e.what() << "\n";
    return e.input_error() ? kExitInput : kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_summarize(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Corpus corpus = ingest(cfg);
    const auto summaries = region_summaries(corpus.matrix, corpus.regions);
    out << summary_table(summaries, corpus.regions, cfg.top);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const SyntheticCorpus corpus = generate_synthetic(spec);
    write_corpus(out_dir, corpus.matrix, corpus.regions, corpus.activities);

    PipelineConfig cfg;
    cfg.regions = "regions.csv";
    cfg.activities = "activities.csv";
    cfg.counts = "counts.csv";
    cfg.ground_truth = "ground_truth.csv";
    cfg.k = static_cast<int>(spec.n_planted_clusters);
    cfg.seed = spec.seed;
    write_artifacts(out_dir, {{"ground_truth.csv", assignments_csv(corpus.ground_truth)},
                              {"corpus.conf", to_config_text(cfg)}});
    out << "wrote " << corpus.matrix.n_regions() << " regions x " << corpus.matrix.n_activities()
        << " activities to " << out_dir << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace regioncluster
