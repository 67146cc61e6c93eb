#pragma once

#include <string>
#include <vector>

#include "regioncluster/clustering.hpp"
#include "regioncluster/corpus.hpp"
#include "regioncluster/evaluation.hpp"
#include "regioncluster/selection.hpp"

namespace regioncluster {

// Text renderers for the run artifacts. Every output ends with a newline and
// depends only on its arguments.

// Kept list, per-activity profiles, and dropped pairs with r to 6 decimals.
std::string selection_json(const SelectionReport& report);
std::string evaluation_json(const EvaluationReport& report);
std::string evaluation_text(const EvaluationReport& report);

// `region_id,cluster_id`
std::string assignments_csv(const ClusterAssignment& assignment);
ClusterAssignment read_assignments(const std::string& path);

std::string distances_csv(const DistanceMatrix& dist);

// FeatureCollection of region points carrying region_id, name, province and
// cluster properties. Regions without coordinates get a null geometry.
std::string clusters_geojson(const ClusterAssignment& assignment, const RegionCatalog& catalog);

// "#rrggbb" per cluster label (index label-1). Hues follow the order in which
// clusters first appear along the dendrogram's leaf order, so clusters that
// sit next to each other in the tree get neighboring hues.
std::vector<std::string> cluster_colors(const Dendrogram& tree, const ClusterAssignment& assignment);

std::string dendrogram_svg(const Dendrogram& tree, const ClusterAssignment& assignment);
std::string map_svg(const ClusterAssignment& assignment, const RegionCatalog& catalog, const Dendrogram& tree);

struct RunSummary {
  std::size_t catalog_regions = 0;
  std::size_t catalog_activities = 0;
  std::size_t matrix_regions = 0;
  std::size_t matrix_activities = 0;
  std::vector<std::string> removed_regions;
  std::vector<std::string> dropped_zero_total;
  std::vector<std::string> warnings;
  std::string measure;
  int k = 0;
};

std::string report_markdown(const RunSummary& run, const SelectionReport& selection,
                            const EvaluationReport& evaluation);

// Table of the top `top` regions by players with population percent and
// national share, followed by aggregate rows.
std::string summary_table(const std::vector<RegionSummary>& summaries, const RegionCatalog& catalog,
                          std::size_t top);

}  // namespace regioncluster
