#include "regioncluster/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "regioncluster/error.hpp"
#include "regioncluster/random.hpp"
#include "regioncluster/selection.hpp"

namespace regioncluster::kernels {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

bool all_zero(std::span<const double> row) {
  return std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
}

// Raises before any parallel work starts, so no kernel throws from inside a
// parallel region.
void check_zero_rows(const RowTable& rows, ZeroRows zero_rows) {
  if (zero_rows != ZeroRows::error) return;
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < rows.n; ++i) {
    if (!all_zero(rows.row(i))) continue;
    if (first) {
      throw UndefinedDistanceError("profiles #" + std::to_string(*first + 1) + " and #" + std::to_string(i + 1) +
                                   " are both all-zero; their distance is undefined");
    }
    first = i;
  }
}

double distance_cell(const RowTable& rows, std::size_t i, std::size_t j, Measure measure, ZeroRows zero_rows) {
  return profile_distance(measure, rows.row(i), rows.row(j), zero_rows);
}

// Column-major copy so each column is contiguous.
std::vector<double> columns_of(std::span<const Count> counts, std::size_t n, std::size_t m) {
  std::vector<double> cols(n * m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t a = 0; a < m; ++a) cols[a * n + r] = static_cast<double>(counts[r * m + a]);
  return cols;
}

std::vector<std::size_t> neighbors_of(std::span<const GeoPoint> points, std::span<const std::size_t> rank,
                                      std::size_t i, std::size_t m, std::vector<std::pair<double, std::size_t>>& scratch) {
  scratch.clear();
  for (std::size_t j = 0; j < points.size(); ++j)
    if (j != i) scratch.emplace_back(haversine_km(points[i], points[j]), j);
  auto closer = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return rank[a.second] < rank[b.second];
  };
  const std::size_t take = std::min(m, scratch.size());
  std::partial_sort(scratch.begin(), scratch.begin() + take, scratch.end(), closer);
  std::vector<std::size_t> out(take);
  for (std::size_t t = 0; t < take; ++t) out[t] = scratch[t].second;
  return out;
}

double one_shuffle(const std::vector<std::vector<std::size_t>>& neighbors, std::span<const int> labels,
                   std::uint64_t seed) {
  std::vector<int> permuted(labels.begin(), labels.end());
  Rng rng(seed);
  shuffle(rng, std::span<int>(permuted));
  return coherence(neighbors, permuted);
}

}  // namespace

double haversine_km(GeoPoint a, GeoPoint b) {
  const double phi1 = a.latitude * kDegToRad;
  const double phi2 = b.latitude * kDegToRad;
  const double dphi = (b.latitude - a.latitude) * kDegToRad;
  const double dlambda = (b.longitude - a.longitude) * kDegToRad;
  const double s = std::sin(dphi / 2);
  const double t = std::sin(dlambda / 2);
  const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double coherence(const std::vector<std::vector<std::size_t>>& neighbors, std::span<const int> labels) {
  std::size_t pairs = 0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    for (std::size_t j : neighbors[i]) {
      ++pairs;
      if (labels[i] == labels[j]) ++agree;
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(pairs);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

std::vector<double> pairwise_distances(const RowTable& rows, Measure measure, ZeroRows zero_rows) {
  check_zero_rows(rows, zero_rows);
  const std::size_t n = rows.n;
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance_cell(rows, i, j, measure, zero_rows);
      out[i * n + j] = d;
      out[j * n + i] = d;
    }
  }
  return out;
}

std::vector<std::optional<double>> column_correlations(std::span<const Count> counts, std::size_t n,
                                                       std::size_t m) {
  std::vector<std::optional<double>> out(m * m);
  if (n < 2) return out;  // correlation needs two observations
  const auto cols = columns_of(counts, n, m);
  for (std::size_t a = 0; a < m; ++a) {
    std::span<const double> x(cols.data() + a * n, n);
    out[a * m + a] = pearson(x, x);
    for (std::size_t b = a + 1; b < m; ++b) {
      std::span<const double> y(cols.data() + b * n, n);
      out[a * m + b] = out[b * m + a] = pearson(x, y);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> nearest_neighbors(std::span<const GeoPoint> points,
                                                        std::span<const std::size_t> rank, std::size_t m) {
  std::vector<std::vector<std::size_t>> out(points.size());
  std::vector<std::pair<double, std::size_t>> scratch;
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = neighbors_of(points, rank, i, m, scratch);
  return out;
}

std::vector<double> shuffled_coherence(const std::vector<std::vector<std::size_t>>& neighbors,
                                       std::span<const int> labels, std::size_t n_shuffles, std::uint64_t seed) {
  std::vector<double> out(n_shuffles);
  for (std::size_t s = 0; s < n_shuffles; ++s) out[s] = one_shuffle(neighbors, labels, seed + s);
  return out;
}

}  // namespace serial

namespace parallel {

std::vector<double> pairwise_distances(const RowTable& rows, Measure measure, ZeroRows zero_rows) {
  check_zero_rows(rows, zero_rows);
  const auto n = static_cast<std::ptrdiff_t>(rows.n);
  std::vector<double> out(rows.n * rows.n, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      const double d = distance_cell(rows, i, j, measure, zero_rows);
      out[i * n + j] = d;
      out[j * n + i] = d;
    }
  }
  return out;
}

std::vector<std::optional<double>> column_correlations(std::span<const Count> counts, std::size_t n,
                                                       std::size_t m) {
  std::vector<std::optional<double>> out(m * m);
  if (n < 2) return out;  // correlation needs two observations
  const auto cols = columns_of(counts, n, m);
  const auto mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t a = 0; a < mm; ++a) {
    std::span<const double> x(cols.data() + a * n, n);
    out[a * m + a] = pearson(x, x);
    for (std::ptrdiff_t b = a + 1; b < mm; ++b) {
      std::span<const double> y(cols.data() + b * n, n);
      out[a * m + b] = out[b * m + a] = pearson(x, y);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> nearest_neighbors(std::span<const GeoPoint> points,
                                                        std::span<const std::size_t> rank, std::size_t m) {
  std::vector<std::vector<std::size_t>> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel
  {
    std::vector<std::pair<double, std::size_t>> scratch;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = neighbors_of(points, rank, i, m, scratch);
  }
  return out;
}

std::vector<double> shuffled_coherence(const std::vector<std::vector<std::size_t>>& neighbors,
                                       std::span<const int> labels, std::size_t n_shuffles, std::uint64_t seed) {
  std::vector<double> out(n_shuffles);
  const auto total = static_cast<std::ptrdiff_t>(n_shuffles);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < total; ++s) out[s] = one_shuffle(neighbors, labels, seed + s);
  return out;
}

}  // namespace parallel

}  // namespace regioncluster::kernels
