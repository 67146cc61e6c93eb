#pragma once

// Data-parallel inner loops of the pipeline. Each kernel has an OpenMP
// version (namespace parallel) and a plain loop (namespace serial) that is
// kept as the reference the tests and benchmarks compare against. Both
// versions write every output cell exactly once, so their results are
// bitwise identical regardless of the thread count.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "regioncluster/clustering.hpp"

namespace regioncluster::kernels {

// Row-major n x m table of non-negative values.
struct RowTable {
  std::span<const double> values;
  std::size_t n = 0;
  std::size_t m = 0;

  std::span<const double> row(std::size_t i) const { return values.subspan(i * m, m); }
};

// Coordinates in degrees.
struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;
};

constexpr double kEarthRadiusKm = 6371.0;

double haversine_km(GeoPoint a, GeoPoint b);

namespace serial {

// Full symmetric n x n matrix.
std::vector<double> pairwise_distances(const RowTable& rows, Measure measure, ZeroRows zero_rows);

// Upper triangle of the correlation matrix between columns of a count table
// with `n` rows and `m` columns, stored as m x m (both triangles filled).
std::vector<std::optional<double>> column_correlations(std::span<const Count> counts, std::size_t n,
                                                       std::size_t m);

// For each point, the indices of its `m` nearest points by great-circle
// distance; ties broken by the lower `rank[j]`.
std::vector<std::vector<std::size_t>> nearest_neighbors(std::span<const GeoPoint> points,
                                                        std::span<const std::size_t> rank, std::size_t m);

// Neighbor coherence of `labels` under `n_shuffles` random permutations; the
// permutation of shuffle s is drawn from an mt19937_64 seeded with seed + s.
std::vector<double> shuffled_coherence(const std::vector<std::vector<std::size_t>>& neighbors,
                                       std::span<const int> labels, std::size_t n_shuffles,
                                       std::uint64_t seed);

}  // namespace serial

namespace parallel {

std::vector<double> pairwise_distances(const RowTable& rows, Measure measure, ZeroRows zero_rows);
std::vector<std::optional<double>> column_correlations(std::span<const Count> counts, std::size_t n,
                                                       std::size_t m);
std::vector<std::vector<std::size_t>> nearest_neighbors(std::span<const GeoPoint> points,
                                                        std::span<const std::size_t> rank, std::size_t m);
std::vector<double> shuffled_coherence(const std::vector<std::vector<std::size_t>>& neighbors,
                                       std::span<const int> labels, std::size_t n_shuffles,
                                       std::uint64_t seed);

}  // namespace parallel

// Fraction of (point, neighbor) pairs whose labels agree.
double coherence(const std::vector<std::vector<std::size_t>>& neighbors, std::span<const int> labels);

int max_threads();

}  // namespace regioncluster::kernels
