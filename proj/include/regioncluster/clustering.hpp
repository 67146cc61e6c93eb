#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regioncluster/corpus.hpp"

namespace regioncluster {

enum class Measure { phi_square, chi_square };

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view text);  // throws ArgumentError

// How a distance between two all-zero profiles is treated.
enum class ZeroRows {
  error,      // UndefinedDistanceError
  identical,  // distance 0
};

// Per-region play fractions over the kept activities:
// values[r][a] = counts[r][a] / region_totals[r].
struct ProfileMatrix {
  std::vector<std::string> regions;
  std::vector<std::string> activities;
  std::vector<double> values;  // row-major, regions x activities

  std::size_t n_regions() const { return regions.size(); }
  std::size_t n_activities() const { return activities.size(); }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * activities.size(), activities.size()};
  }
};

struct ProfileResult {
  ProfileMatrix profiles;
  std::vector<std::string> dropped;  // regions with zero total players
};

// Columns follow the order of `kept`. Throws ArgumentError if `kept` is empty
// or names an activity the matrix does not carry.
ProfileResult build_profiles(const CountMatrix& matrix, const std::vector<std::string>& kept);

// Chi-square statistic of the 2 x m contingency table formed by rows x and y.
// Columns with a zero total contribute nothing. Throws
// UndefinedDistanceError when both rows sum to zero.
double chi_square_statistic(std::span<const double> x, std::span<const double> y);

// sqrt(X^2 / N), N the grand total of the table.
double phi_square_distance(std::span<const double> x, std::span<const double> y);
// sqrt(X^2)
double chi_square_distance(std::span<const double> x, std::span<const double> y);

double profile_distance(Measure m, std::span<const double> x, std::span<const double> y,
                        ZeroRows zero_rows = ZeroRows::error);

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  // Throws ArgumentError unless `entries` is n x n, symmetric, zero on the diagonal.
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> entries, Measure measure);

  std::size_t n() const { return labels_.size(); }
  double at(std::size_t i, std::size_t j) const { return entries_[i * labels_.size() + j]; }
  const std::vector<double>& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Measure measure() const { return measure_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> entries_;
  Measure measure_ = Measure::phi_square;
};

// All pairwise distances, computed in parallel. Throws ArgumentError for
// fewer than 2 regions.
DistanceMatrix distance_matrix(const ProfileMatrix& profiles, Measure measure,
                               ZeroRows zero_rows = ZeroRows::error);

// Nodes 0..n-1 are leaves; merge i creates node n + i.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;

  std::size_t n() const { return leaves.size(); }
  bool is_leaf(std::size_t node) const { return node < leaves.size(); }
  std::size_t root() const { return leaves.size() + merges.size() - 1; }
};

// Average linkage (UPGMA) with the Lance-Williams update. Among pairs whose
// linkage distance is within a relative 1e-12 of the minimum, the pair with the
// lexicographically smallest (min leaf of A, min leaf of B) merges first; the
// cluster with the smaller min leaf becomes the left child.
Dendrogram upgma(const DistanceMatrix& dist);

// Leaves in left-to-right drawing order.
std::vector<std::size_t> leaf_order(const Dendrogram& tree);

struct ClusterAssignment {
  int k = 0;
  std::vector<std::string> regions;
  std::vector<int> labels;  // 1..k, parallel to regions

  int label_of(const std::string& region_id) const;
  std::vector<std::size_t> sizes() const;  // index label-1
};

// Labels groups 1..k by size descending, ties by smallest member region_id.
// `groups[i]` is an arbitrary integer group key for regions[i].
ClusterAssignment make_assignment(const std::vector<std::string>& regions, const std::vector<std::size_t>& groups);

// Applies the first n-k merges; the resulting components are the clusters.
ClusterAssignment cut(const Dendrogram& tree, int k);

// Newick text with leaf branches equal to the parent height and internal
// branches equal to parent height minus own height; 9 significant digits.
std::string export_newick(const Dendrogram& tree);

// Inverse of export_newick. Node heights are recovered from branch lengths;
// merges are ordered by height, post-order among equal heights.
Dendrogram parse_newick(std::string_view text);

}  // namespace regioncluster
