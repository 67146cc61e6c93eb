#include "regioncluster/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "regioncluster/error.hpp"
#include "regioncluster/kernels.hpp"

namespace regioncluster {

std::string_view to_string(Measure m) {
  return m == Measure::phi_square ? "phi_square" : "chi_square";
}

Measure parse_measure(std::string_view text) {
  if (text == "phi_square") return Measure::phi_square;
  if (text == "chi_square") return Measure::chi_square;
  throw ArgumentError("unknown measure '" + std::string(text) + "' (expected phi_square or chi_square)");
}

ProfileResult build_profiles(const CountMatrix& matrix, const std::vector<std::string>& kept) {
  if (kept.empty()) throw ArgumentError("build_profiles: no activities to profile");
  std::vector<std::size_t> cols;
  cols.reserve(kept.size());
  for (const auto& id : kept) {
    auto a = matrix.activity_index(id);
    if (!a) throw ArgumentError("build_profiles: activity '" + id + "' is not in the matrix");
    cols.push_back(*a);
  }

  ProfileResult result;
  result.profiles.activities = kept;
  for (std::size_t r = 0; r < matrix.n_regions(); ++r) {
    const Count total = matrix.region_totals()[r];
    if (total == 0) {
      result.dropped.push_back(matrix.regions()[r]);
      continue;
    }
    result.profiles.regions.push_back(matrix.regions()[r]);
    for (std::size_t a : cols)
      result.profiles.values.push_back(static_cast<double>(matrix.at(r, a)) / static_cast<double>(total));
  }
  return result;
}

double chi_square_statistic(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("chi-square: rows differ in length");
  double rx = 0.0;
  double ry = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0.0 || y[j] < 0.0) throw ArgumentError("chi-square: negative entry");
    rx += x[j];
    ry += y[j];
  }
  const double total = rx + ry;
  if (total == 0.0) throw UndefinedDistanceError("chi-square: both rows are all-zero");

  double stat = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double col = x[j] + y[j];
    if (col == 0.0) continue;
    const double ex = rx * col / total;
    const double ey = ry * col / total;
    // An expected cell of 0 means the whole row is 0, so the observed cell is too.
    if (ex > 0.0) stat += (x[j] - ex) * (x[j] - ex) / ex;
    if (ey > 0.0) stat += (y[j] - ey) * (y[j] - ey) / ey;
  }
  return stat;
}

double phi_square_distance(std::span<const double> x, std::span<const double> y) {
  const double stat = chi_square_statistic(x, y);
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) total += x[j] + y[j];
  return std::sqrt(stat / total);
}

double chi_square_distance(std::span<const double> x, std::span<const double> y) {
  return std::sqrt(chi_square_statistic(x, y));
}

double profile_distance(Measure m, std::span<const double> x, std::span<const double> y, ZeroRows zero_rows) {
  if (zero_rows == ZeroRows::identical) {
    auto zero = [](double v) { return v == 0.0; };
    if (std::all_of(x.begin(), x.end(), zero) && std::all_of(y.begin(), y.end(), zero)) {
      if (x.size() != y.size()) throw ArgumentError("distance: rows differ in length");
      return 0.0;
    }
  }
  return m == Measure::phi_square ? phi_square_distance(x, y) : chi_square_distance(x, y);
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, std::vector<double> entries, Measure measure)
    : labels_(std::move(labels)), entries_(std::move(entries)), measure_(measure) {
  const std::size_t n = labels_.size();
  if (entries_.size() != n * n) throw ArgumentError("distance matrix is not n x n");
  for (std::size_t i = 0; i < n; ++i) {
    if (entries_[i * n + i] != 0.0) throw ArgumentError("distance matrix has a non-zero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = entries_[i * n + j];
      const double b = entries_[j * n + i];
      if (a != b && !(std::isnan(a) && std::isnan(b))) throw ArgumentError("distance matrix is not symmetric");
    }
  }
}

DistanceMatrix distance_matrix(const ProfileMatrix& profiles, Measure measure, ZeroRows zero_rows) {
  if (profiles.n_regions() < 2) throw ArgumentError("distance matrix needs at least 2 regions");
  kernels::RowTable rows{profiles.values, profiles.n_regions(), profiles.n_activities()};
  return DistanceMatrix(profiles.regions, kernels::parallel::pairwise_distances(rows, measure, zero_rows), measure);
}

Dendrogram upgma(const DistanceMatrix& dist) {
  const std::size_t n = dist.n();
  if (n < 2) throw ArgumentError("upgma needs at least 2 leaves");
  for (double d : dist.entries())
    if (!std::isfinite(d)) throw ArgumentError("upgma: distance matrix contains a non-finite entry");

  // Slot i holds the active cluster whose smallest leaf is i.
  std::vector<double> d = dist.entries();
  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> node(n);
  std::iota(node.begin(), node.end(), std::size_t{0});

  Dendrogram tree;
  tree.leaves = dist.labels();
  tree.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = n;
    std::size_t bj = n;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const double* row = d.data() + i * n;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (bi == n || row[j] < best - 1e-12 * std::max(1.0, std::abs(best))) {
          best = row[j];
          bi = i;
          bj = j;
        }
      }
    }

    double height = best;
    if (!tree.merges.empty()) {
      const double prev = tree.merges.back().height;
      if (height < prev - 1e-9 * std::max(1.0, prev))
        throw std::logic_error("upgma: merge heights decreased beyond rounding");
      height = std::max(height, prev);
    }
    tree.merges.push_back({node[bi], node[bj], height, size[bi] + size[bj]});

    const double si = static_cast<double>(size[bi]);
    const double sj = static_cast<double>(size[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double merged = (si * d[bi * n + k] + sj * d[bj * n + k]) / (si + sj);
      d[bi * n + k] = merged;
      d[k * n + bi] = merged;
    }
    active[bj] = false;
    size[bi] += size[bj];
    node[bi] = n + step;
  }
  return tree;
}

std::vector<std::size_t> leaf_order(const Dendrogram& tree) {
  std::vector<std::size_t> order;
  if (tree.n() == 0) return order;
  if (tree.merges.empty()) return {0};
  std::vector<std::size_t> stack{tree.root()};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (tree.is_leaf(node)) {
      order.push_back(node);
      continue;
    }
    const Merge& m = tree.merges[node - tree.n()];
    stack.push_back(m.right);
    stack.push_back(m.left);
  }
  return order;
}

int ClusterAssignment::label_of(const std::string& region_id) const {
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i] == region_id) return labels[i];
  throw IntegrityError("region '" + region_id + "' has no cluster label");
}

std::vector<std::size_t> ClusterAssignment::sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(k), 0);
  for (int label : labels) ++out[static_cast<std::size_t>(label - 1)];
  return out;
}

ClusterAssignment make_assignment(const std::vector<std::string>& regions, const std::vector<std::size_t>& groups) {
  if (regions.size() != groups.size()) throw ArgumentError("make_assignment: size mismatch");
  struct Group {
    std::size_t key;
    std::size_t size = 0;
    const std::string* smallest = nullptr;
  };
  std::unordered_map<std::size_t, std::size_t> slot;
  std::vector<Group> found;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    auto [it, inserted] = slot.emplace(groups[i], found.size());
    if (inserted) found.push_back({groups[i]});
    Group& g = found[it->second];
    ++g.size;
    if (!g.smallest || regions[i] < *g.smallest) g.smallest = &regions[i];
  }
  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (found[a].size != found[b].size) return found[a].size > found[b].size;
    return *found[a].smallest < *found[b].smallest;
  });
  std::vector<int> label_of_slot(found.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) label_of_slot[order[rank]] = static_cast<int>(rank + 1);

  ClusterAssignment out;
  out.k = static_cast<int>(found.size());
  out.regions = regions;
  out.labels.reserve(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) out.labels.push_back(label_of_slot[slot.at(groups[i])]);
  return out;
}

ClusterAssignment cut(const Dendrogram& tree, int k) {
  const std::size_t n = tree.n();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw ArgumentError("cut: k = " + std::to_string(k) + " is outside [1, " + std::to_string(n) + "]");
  if (tree.merges.size() + 1 != n) throw ArgumentError("cut: dendrogram has the wrong number of merges");

  std::vector<std::size_t> parent(n + tree.merges.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const std::size_t applied = n - static_cast<std::size_t>(k);
  for (std::size_t i = 0; i < applied; ++i) {
    const Merge& m = tree.merges[i];
    parent[find(m.left)] = n + i;
    parent[find(m.right)] = n + i;
  }
  std::vector<std::size_t> groups(n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) groups[leaf] = find(leaf);
  return make_assignment(tree.leaves, groups);
}

namespace {

std::string newick_name(const std::string& name) {
  if (!name.empty() && name.find_first_of("()[]':;, \t\r\n") == std::string::npos) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += "''";
    else out.push_back(c);
  }
  return out + "'";
}

std::string newick_length(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double node_height(const Dendrogram& tree, std::size_t node) {
  return tree.is_leaf(node) ? 0.0 : tree.merges[node - tree.n()].height;
}

void emit(const Dendrogram& tree, std::size_t node, std::string& out) {
  if (tree.is_leaf(node)) {
    out += newick_name(tree.leaves[node]);
    return;
  }
  const Merge& m = tree.merges[node - tree.n()];
  out += '(';
  emit(tree, m.left, out);
  out += ':' + newick_length(m.height - node_height(tree, m.left));
  out += ',';
  emit(tree, m.right, out);
  out += ':' + newick_length(m.height - node_height(tree, m.right));
  out += ')';
}

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  struct Node {
    std::vector<std::size_t> children;
    std::string name;
    double branch = 0.0;
    double height = 0.0;
    std::size_t leaves = 0;
  };

  std::vector<Node> nodes;

  std::size_t parse_tree() {
    const std::size_t root = parse_subtree();
    skip_ws();
    expect(';');
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return root;
  }

 private:
  std::size_t parse_subtree() {
    skip_ws();
    Node node;
    if (peek() == '(') {
      ++pos_;
      node.children.push_back(parse_child());
      while (skip_ws(), peek() == ',') {
        ++pos_;
        node.children.push_back(parse_child());
      }
      expect(')');
      if (node.children.size() != 2) fail("only binary trees are supported");
      const Node& left = nodes[node.children[0]];
      const Node& right = nodes[node.children[1]];
      // Rounded branch lengths can disagree slightly; never sit below a child.
      node.height = std::max({left.height + left.branch, left.height, right.height});
      node.leaves = left.leaves + nodes[node.children[1]].leaves;
      skip_ws();
      if (peek() != ':' && peek() != ',' && peek() != ')' && peek() != ';') parse_name();  // internal label, ignored
    } else {
      node.name = parse_name();
      node.leaves = 1;
    }
    nodes.push_back(std::move(node));
    return nodes.size() - 1;
  }

  std::size_t parse_child() {
    const std::size_t id = parse_subtree();
    skip_ws();
    expect(':');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::string_view("0123456789+-.eE").find(text_[pos_]) != std::string_view::npos)
      ++pos_;
    const std::string number(text_.substr(start, pos_ - start));
    if (number.empty()) fail("missing branch length");
    char* end = nullptr;
    const double v = std::strtod(number.c_str(), &end);
    if (end != number.c_str() + number.size()) fail("bad branch length '" + number + "'");
    nodes[id].branch = v;
    return id;
  }

  std::string parse_name() {
    skip_ws();
    std::string name;
    if (peek() == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted name");
        if (text_[pos_] == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
            name.push_back('\'');
            pos_ += 2;
            continue;
          }
          ++pos_;
          break;
        }
        name.push_back(text_[pos_++]);
      }
      return name;
    }
    while (pos_ < text_.size() && std::string_view("()[]':;, \t\r\n").find(text_[pos_]) == std::string_view::npos)
      name.push_back(text_[pos_++]);
    if (name.empty()) fail("expected a leaf name");
    return name;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("newick: " + what + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string export_newick(const Dendrogram& tree) {
  std::string out;
  if (tree.n() == 0) return ";";
  emit(tree, tree.merges.empty() ? 0 : tree.root(), out);
  out += ';';
  return out;
}

Dendrogram parse_newick(std::string_view text) {
  NewickParser parser(text);
  const std::size_t root = parser.parse_tree();
  auto& nodes = parser.nodes;

  // Nodes are stored in post-order, so children precede parents.
  Dendrogram tree;
  std::vector<std::size_t> internal;
  std::vector<std::size_t> ref(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].children.empty()) {
      ref[i] = tree.leaves.size();
      tree.leaves.push_back(nodes[i].name);
    } else {
      internal.push_back(i);
    }
  }
  (void)root;
  std::stable_sort(internal.begin(), internal.end(),
                   [&](std::size_t a, std::size_t b) { return nodes[a].height < nodes[b].height; });
  const std::size_t n = tree.leaves.size();
  for (std::size_t pos = 0; pos < internal.size(); ++pos) {
    const auto& node = nodes[internal[pos]];
    ref[internal[pos]] = n + pos;
    tree.merges.push_back({ref[node.children[0]], ref[node.children[1]], node.height, node.leaves});
  }
  return tree;
}

}  // namespace regioncluster
