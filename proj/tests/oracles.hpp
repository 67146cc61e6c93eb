#pragma once

// Reference computations for the tests. Each one follows a different route
// from the library code it checks and shares no code with it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

// Phi-square through the shortcut X^2 = N * (sum_ij O_ij^2 / (R_i C_j) - 1),
// skipping empty rows and columns.
inline double phi_square(const std::vector<double>& x, const std::vector<double>& y) {
  const std::vector<const std::vector<double>*> table{&x, &y};
  double grand = 0.0;
  std::vector<double> row_total(2, 0.0);
  std::vector<double> col_total(x.size(), 0.0);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      row_total[i] += (*table[i])[j];
      col_total[j] += (*table[i])[j];
      grand += (*table[i])[j];
    }
  }
  double ratio = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    if (row_total[i] == 0.0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (col_total[j] == 0.0) continue;
      const double o = (*table[i])[j];
      ratio += o * o / (row_total[i] * col_total[j]);
    }
  }
  const double chi2 = std::max(0.0, grand * (ratio - 1.0));
  return std::sqrt(chi2 / grand);
}

// Textbook single-pass Pearson formula.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

inline double top_share(std::vector<long long> counts, std::size_t k) {
  std::sort(counts.begin(), counts.end(), std::greater<>());
  double top = 0, all = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    all += static_cast<double>(counts[i]);
    if (i < k) top += static_cast<double>(counts[i]);
  }
  return top / all;
}

// One merge of the naive average-linkage run: the two leaf sets and the height.
struct NaiveMerge {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  double height;
};

// Average linkage that recomputes every cluster-pair average from the leaf
// distances at every step. Clusters are ordered by smallest leaf; among
// pairs within a relative 1e-12 of the running minimum the first in that
// order wins.
inline std::vector<NaiveMerge> naive_upgma(const std::vector<double>& d, std::size_t n) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
  std::vector<NaiveMerge> merges;
  while (clusters.size() > 1) {
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::size_t bi = 0, bj = 0;
    bool found = false;
    double best = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        double sum = 0.0;
        for (std::size_t a : clusters[i])
          for (std::size_t b : clusters[j]) sum += d[a * n + b];
        const double avg = sum / static_cast<double>(clusters[i].size() * clusters[j].size());
        if (!found || avg < best - 1e-12 * std::max(1.0, std::abs(best))) {
          found = true;
          best = avg;
          bi = i;
          bj = j;
        }
      }
    }
    merges.push_back({clusters[bi], clusters[bj], best});
    std::vector<std::size_t> joined = clusters[bi];
    joined.insert(joined.end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(joined.begin(), joined.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    clusters[bi] = std::move(joined);
  }
  return merges;
}

// ARI from pair counts: a = together in both, b = together only in the first,
// c = together only in the second, d = apart in both.
inline double pair_counting_ari(const std::vector<int>& p, const std::vector<int>& q) {
  double a = 0, b = 0, c = 0, d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const bool same_p = p[i] == p[j];
      const bool same_q = q[i] == q[j];
      if (same_p && same_q) ++a;
      else if (same_p) ++b;
      else if (same_q) ++c;
      else ++d;
    }
  }
  const double denom = (a + b) * (b + d) + (a + c) * (c + d);
  if (denom == 0.0) return 1.0;
  return 2.0 * (a * d - b * c) / denom;
}

// All set partitions of n items as restricted growth strings.
inline std::vector<std::vector<int>> set_partitions(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_label) {
    if (i == n) {
      out.push_back(current);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      current[i] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) return {{}};
  current[0] = 0;
  rec(1, 0);
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("regioncluster_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
