#include "regioncluster/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "regioncluster/csv.hpp"
#include "regioncluster/error.hpp"

namespace regioncluster {

using nlohmann::json;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string hsl_hex(double hue, double sat, double light) {
  const double c = (1.0 - std::abs(2.0 * light - 1.0)) * sat;
  const double hp = hue / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = light - c / 2.0;
  char buf[8];
  auto channel = [&](double v) { return static_cast<int>(std::lround((v + m) * 255.0)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(r), channel(g), channel(b));
  return buf;
}

}  // namespace

std::string selection_json(const SelectionReport& report) {
  std::ostringstream out;
  out << "{\n  \"kept\": [";
  for (std::size_t i = 0; i < report.kept.size(); ++i) out << (i ? ", " : "") << quoted(report.kept[i]);
  out << "],\n  \"counts\": {";
  out << "\"regional\": " << report.count(Classification::regional)
      << ", \"excluded_diffuse\": " << report.count(Classification::excluded_diffuse)
      << ", \"excluded_concentrated\": " << report.count(Classification::excluded_concentrated)
      << ", \"excluded_empty\": " << report.count(Classification::excluded_empty) << ", \"kept\": " << report.kept.size()
      << "},\n  \"profiles\": [";
  for (std::size_t i = 0; i < report.profiles.size(); ++i) {
    const auto& p = report.profiles[i];
    out << (i ? ",\n" : "\n") << "    {\"activity_id\": " << quoted(p.activity_id)
        << ", \"national_total\": " << p.national_total
        << ", \"top_small_share\": " << optional_number(p.top_small_share).dump()
        << ", \"top_large_share\": " << optional_number(p.top_large_share).dump() << ", \"classification\": \""
        << to_string(p.classification) << "\"}";
  }
  out << (report.profiles.empty() ? "" : "\n  ") << "],\n  \"dropped_correlated\": [";
  for (std::size_t i = 0; i < report.dropped_correlated.size(); ++i) {
    const auto& d = report.dropped_correlated[i];
    out << (i ? ",\n" : "\n") << "    {\"dropped\": " << quoted(d.dropped_id) << ", \"kept\": " << quoted(d.kept_id)
        << ", \"r\": " << fixed(d.r, 6) << "}";
  }
  out << (report.dropped_correlated.empty() ? "" : "\n  ") << "]\n}\n";
  return out.str();
}

std::string evaluation_json(const EvaluationReport& report) {
  json j;
  j["province_purity"] = report.province_purity;
  j["adjusted_rand_vs_provinces"] = report.adjusted_rand_vs_provinces;
  j["neighbor_coherence"] = report.neighbor_coherence;
  j["coherence_baseline_mean"] = report.coherence_baseline_mean;
  j["coherence_baseline_std"] = report.coherence_baseline_std;
  j["neighbors"] = report.neighbors;
  j["shuffles"] = report.shuffles;
  j["coherence_excluded"] = report.coherence_excluded;
  j["adjusted_rand_vs_ground_truth"] = optional_number(report.adjusted_rand_vs_ground_truth);
  json clusters = json::array();
  for (const auto& c : report.per_cluster) {
    clusters.push_back({{"label", c.label},
                        {"size", c.size},
                        {"dominant_province", c.dominant_province},
                        {"dominant_share", c.dominant_share}});
  }
  j["per_cluster"] = std::move(clusters);
  return j.dump(2) + "\n";
}

std::string evaluation_text(const EvaluationReport& report) {
  std::ostringstream out;
  out << "province purity            " << fixed(report.province_purity, 4) << "\n";
  out << "ARI vs provinces           " << fixed(report.adjusted_rand_vs_provinces, 4) << "\n";
  if (report.adjusted_rand_vs_ground_truth)
    out << "ARI vs ground truth        " << fixed(*report.adjusted_rand_vs_ground_truth, 4) << "\n";
  std::string label = "neighbor coherence (m=" + std::to_string(report.neighbors) + ")";
  label.resize(std::max<std::size_t>(label.size() + 1, 27), ' ');
  out << label << fixed(report.neighbor_coherence, 4) << "\n";
  out << "permutation baseline       " << fixed(report.coherence_baseline_mean, 4) << " +/- "
      << fixed(report.coherence_baseline_std, 4) << " (" << report.shuffles << " shuffles)\n";
  if (report.coherence_baseline_std > 0) {
    out << "coherence z-score          "
        << fixed((report.neighbor_coherence - report.coherence_baseline_mean) / report.coherence_baseline_std, 2)
        << "\n";
  }
  return out.str();
}

std::string assignments_csv(const ClusterAssignment& assignment) {
  std::ostringstream out;
  out << "region_id,cluster_id\n";
  for (std::size_t i = 0; i < assignment.regions.size(); ++i)
    csv::write_row(out, {assignment.regions[i], std::to_string(assignment.labels[i])});
  return out.str();
}

ClusterAssignment read_assignments(const std::string& path) {
  auto records = csv::read_file(path);
  csv::expect_header(records, 0, {"region_id", "cluster_id"}, path);
  std::vector<std::string> regions;
  std::vector<std::size_t> groups;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.fields.size() != 2) throw ParseError(path, rec.line, "expected 2 fields");
    const auto id = csv::parse_int(rec.fields[1], path, rec.line, "cluster_id");
    if (id < 0) throw ValidationError(path + ":" + std::to_string(rec.line) + ": negative cluster_id");
    regions.push_back(rec.fields[0]);
    groups.push_back(static_cast<std::size_t>(id));
  }
  return make_assignment(regions, groups);
}

std::string distances_csv(const DistanceMatrix& dist) {
  std::ostringstream out;
  std::vector<std::string> header{"region_id"};
  header.insert(header.end(), dist.labels().begin(), dist.labels().end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < dist.n(); ++i) {
    std::vector<std::string> row{dist.labels()[i]};
    for (std::size_t j = 0; j < dist.n(); ++j) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.9g", dist.at(i, j));
      row.emplace_back(buf);
    }
    csv::write_row(out, row);
  }
  return out.str();
}

std::string clusters_geojson(const ClusterAssignment& assignment, const RegionCatalog& catalog) {
  json features = json::array();
  for (std::size_t i = 0; i < assignment.regions.size(); ++i) {
    const RegionMeta& meta = catalog.at(assignment.regions[i]);
    json feature;
    feature["type"] = "Feature";
    if (meta.has_coordinates()) {
      feature["geometry"] = {{"type", "Point"}, {"coordinates", {*meta.longitude, *meta.latitude}}};
    } else {
      feature["geometry"] = nullptr;
    }
    feature["properties"] = {{"region_id", meta.region_id},
                             {"name", meta.name},
                             {"province", meta.province ? json(*meta.province) : json(nullptr)},
                             {"cluster", assignment.labels[i]}};
    features.push_back(std::move(feature));
  }
  json collection{{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return collection.dump() + "\n";
}

std::vector<std::string> cluster_colors(const Dendrogram& tree, const ClusterAssignment& assignment) {
  std::map<std::string, int> label_of;
  for (std::size_t i = 0; i < assignment.regions.size(); ++i) label_of[assignment.regions[i]] = assignment.labels[i];
  std::vector<int> rank(static_cast<std::size_t>(assignment.k), -1);
  int next = 0;
  for (std::size_t leaf : leaf_order(tree)) {
    auto it = label_of.find(tree.leaves[leaf]);
    if (it == label_of.end()) continue;
    int& r = rank[static_cast<std::size_t>(it->second - 1)];
    if (r < 0) r = next++;
  }
  for (int& r : rank)
    if (r < 0) r = next++;
  std::vector<std::string> colors;
  const double k = std::max(1, assignment.k);
  for (int r : rank) colors.push_back(hsl_hex(300.0 * r / k, 0.65, 0.5));
  return colors;
}

std::string dendrogram_svg(const Dendrogram& tree, const ClusterAssignment& assignment) {
  const std::size_t n = tree.n();
  const auto colors = cluster_colors(tree, assignment);
  std::map<std::string, int> label_of;
  for (std::size_t i = 0; i < assignment.regions.size(); ++i) label_of[assignment.regions[i]] = assignment.labels[i];

  const double spacing = 8.0;
  const double margin = 40.0;
  const double plot_h = 400.0;
  const double width = std::max(400.0, 2 * margin + spacing * static_cast<double>(n));
  const double height = plot_h + 2 * margin + 60.0;
  const double top = tree.merges.empty() ? 1.0 : std::max(tree.merges.back().height, 1e-12);

  std::vector<double> x(n + tree.merges.size());
  std::vector<double> y(n + tree.merges.size());
  const auto order = leaf_order(tree);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    x[order[pos]] = margin + spacing * (static_cast<double>(pos) + 0.5);
    y[order[pos]] = margin + plot_h;
  }
  for (std::size_t i = 0; i < tree.merges.size(); ++i) {
    const Merge& m = tree.merges[i];
    x[n + i] = 0.5 * (x[m.left] + x[m.right]);
    y[n + i] = margin + plot_h * (1.0 - m.height / top);
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 1) << "\" height=\"" << fixed(height, 1)
      << "\" viewBox=\"0 0 " << fixed(width, 1) << ' ' << fixed(height, 1) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n";
  for (std::size_t i = 0; i < tree.merges.size(); ++i) {
    const Merge& m = tree.merges[i];
    const std::size_t self = n + i;
    out << "<path d=\"M" << fixed(x[m.left], 2) << ',' << fixed(y[m.left], 2) << " V" << fixed(y[self], 2) << " H"
        << fixed(x[m.right], 2) << " V" << fixed(y[m.right], 2) << "\"/>\n";
  }
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"6\">\n";
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    auto it = label_of.find(tree.leaves[leaf]);
    const std::string color = it == label_of.end() ? "#888888" : colors[static_cast<std::size_t>(it->second - 1)];
    out << "<circle cx=\"" << fixed(x[leaf], 2) << "\" cy=\"" << fixed(y[leaf], 2) << "\" r=\"2.5\" fill=\"" << color
        << "\"/>\n";
    out << "<text transform=\"translate(" << fixed(x[leaf] + 2, 2) << ',' << fixed(y[leaf] + 6, 2)
        << ") rotate(90)\">" << xml_escape(tree.leaves[leaf]) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text x=\"" << fixed(margin, 1) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"12\">average linkage, "
      << assignment.k << " clusters, top height " << fixed(top, 4) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string map_svg(const ClusterAssignment& assignment, const RegionCatalog& catalog, const Dendrogram& tree) {
  const auto colors = cluster_colors(tree, assignment);
  double min_lon = std::numeric_limits<double>::infinity();
  double max_lon = -min_lon;
  double min_lat = min_lon;
  double max_lat = -min_lon;
  for (const auto& id : assignment.regions) {
    const RegionMeta& meta = catalog.at(id);
    if (!meta.has_coordinates()) continue;
    min_lon = std::min(min_lon, *meta.longitude);
    max_lon = std::max(max_lon, *meta.longitude);
    min_lat = std::min(min_lat, *meta.latitude);
    max_lat = std::max(max_lat, *meta.latitude);
  }
  const bool any = std::isfinite(min_lon);
  const double span = any ? std::max({max_lon - min_lon, max_lat - min_lat, 1e-6}) : 1.0;
  const double margin = 30.0;
  const double size = 600.0;
  const double legend = 140.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(size + 2 * margin + legend, 1) << "\" height=\""
      << fixed(size + 2 * margin, 1) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g stroke=\"#333\" stroke-width=\"0.3\">\n";
  for (std::size_t i = 0; i < assignment.regions.size(); ++i) {
    const RegionMeta& meta = catalog.at(assignment.regions[i]);
    if (!meta.has_coordinates()) continue;
    const double px = margin + size * (*meta.longitude - min_lon) / span;
    const double py = margin + size * (max_lat - *meta.latitude) / span;
    out << "<circle cx=\"" << fixed(px, 2) << "\" cy=\"" << fixed(py, 2) << "\" r=\"4\" fill=\""
        << colors[static_cast<std::size_t>(assignment.labels[i] - 1)] << "\"><title>" << xml_escape(meta.region_id)
        << " (cluster " << assignment.labels[i] << ")</title></circle>\n";
  }
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int label = 1; label <= assignment.k; ++label) {
    const double ly = margin + 16.0 * (label - 1);
    const double lx = size + 2 * margin;
    out << "<rect x=\"" << fixed(lx, 1) << "\" y=\"" << fixed(ly, 1) << "\" width=\"10\" height=\"10\" fill=\""
        << colors[static_cast<std::size_t>(label - 1)] << "\"/>";
    out << "<text x=\"" << fixed(lx + 14, 1) << "\" y=\"" << fixed(ly + 9, 1) << "\">cluster " << label << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string report_markdown(const RunSummary& run, const SelectionReport& selection,
                            const EvaluationReport& evaluation) {
  std::ostringstream out;
  out << "# Regional clustering run\n\n";
  out << "## Input\n\n";
  out << "- catalogs: " << run.catalog_regions << " regions, " << run.catalog_activities << " activities\n";
  out << "- count matrix: " << run.matrix_regions << " regions x " << run.matrix_activities << " activities\n";
  out << "- excluded regions: " << run.removed_regions.size() << "\n";
  out << "- regions dropped for zero players: " << run.dropped_zero_total.size() << "\n";
  for (const auto& w : run.warnings) out << "- warning: " << w << "\n";

  out << "\n## Activity selection\n\n";
  out << "| classification | activities |\n|---|---:|\n";
  for (auto c : {Classification::regional, Classification::excluded_diffuse, Classification::excluded_concentrated,
                 Classification::excluded_empty})
    out << "| " << to_string(c) << " | " << selection.count(c) << " |\n";
  out << "\nKept " << selection.kept.size() << " activities after dropping " << selection.dropped_correlated.size()
      << " correlated duplicates.\n";

  out << "\n## Clusters\n\n";
  out << "Measure " << run.measure << ", average linkage, k = " << run.k << ".\n\n";
  out << "| cluster | size | dominant province | share |\n|---:|---:|---|---:|\n";
  for (const auto& c : evaluation.per_cluster) {
    out << "| " << c.label << " | " << c.size << " | " << c.dominant_province << " | " << fixed(c.dominant_share, 3)
        << " |\n";
  }

  out << "\n## Evaluation\n\n```\n" << evaluation_text(evaluation) << "```\n";
  return out.str();
}

std::string summary_table(const std::vector<RegionSummary>& summaries, const RegionCatalog& catalog,
                          std::size_t top) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-5s %-20s %-14s %12s %14s %8s %8s\n", "rank", "region", "province", "players",
                "population", "percent", "share");
  out << line;
  const std::size_t shown = std::min(top, summaries.size());
  Count top_players = 0;
  std::int64_t top_population = 0;
  Count all_players = 0;
  std::int64_t all_population = 0;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto& s = summaries[i];
    all_players += s.players;
    all_population += s.population;
    if (i >= shown) continue;
    top_players += s.players;
    top_population += s.population;
    const RegionMeta& meta = catalog.at(s.region_id);
    const std::string percent = s.percent_of_population ? fixed(100.0 * *s.percent_of_population, 2) + "%" : "n/a";
    std::snprintf(line, sizeof line, "%-5zu %-20s %-14s %12lld %14lld %8s %7s%%\n", i + 1, meta.name.c_str(),
                  meta.province.value_or("NA").c_str(), static_cast<long long>(s.players),
                  static_cast<long long>(s.population), percent.c_str(),
                  fixed(100.0 * s.share_of_national, 2).c_str());
    out << line;
  }
  auto aggregate = [&](const char* label, Count players, std::int64_t population) {
    const std::string percent =
        population > 0 ? fixed(100.0 * static_cast<double>(players) / static_cast<double>(population), 2) + "%" : "n/a";
    const double share = all_players > 0 ? static_cast<double>(players) / static_cast<double>(all_players) : 0.0;
    std::snprintf(line, sizeof line, "%-5s %-20s %-14s %12lld %14lld %8s %7s%%\n", "", label, "NA",
                  static_cast<long long>(players), static_cast<long long>(population), percent.c_str(),
                  fixed(100.0 * share, 2).c_str());
    out << line;
  };
  const std::string top_label = "All top " + std::to_string(shown);
  aggregate(top_label.c_str(), top_players, top_population);
  aggregate("All regions", all_players, all_population);
  return out.str();
}

}  // namespace regioncluster
