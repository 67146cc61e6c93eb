#include "regioncluster/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include "regioncluster/csv.hpp"
#include "regioncluster/error.hpp"

namespace regioncluster {

namespace {

constexpr std::string_view kTotalsMarker = "[totals]";

bool parse_bool(const std::string& text, const std::string& source, std::size_t line) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ParseError(source, line, "field 'included' must be true or false, got '" + text + "'");
}

void expect_width(const csv::Record& rec, std::size_t width, const std::string& source) {
  if (rec.fields.size() != width) {
    throw ParseError(source, rec.line,
                     "expected " + std::to_string(width) + " fields, got " +
                         std::to_string(rec.fields.size()));
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RegionCatalog::RegionCatalog(std::vector<RegionMeta> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const RegionMeta& e = entries_[i];
    if (e.region_id.empty()) throw ValidationError("region #" + std::to_string(i + 1) + " has an empty region_id");
    if (!index_.emplace(e.region_id, i).second) throw ValidationError("duplicate region_id '" + e.region_id + "'");
    if (e.latitude && (*e.latitude < -90.0 || *e.latitude > 90.0))
      throw ValidationError("region '" + e.region_id + "': latitude out of [-90, 90]");
    if (e.longitude && (*e.longitude < -180.0 || *e.longitude > 180.0))
      throw ValidationError("region '" + e.region_id + "': longitude out of [-180, 180]");
    if (e.population < 0) throw ValidationError("region '" + e.region_id + "': negative population");
  }
}

std::optional<std::size_t> RegionCatalog::find(const std::string& region_id) const {
  auto it = index_.find(region_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const RegionMeta& RegionCatalog::at(const std::string& region_id) const {
  auto idx = find(region_id);
  if (!idx) throw IntegrityError("unknown region_id '" + region_id + "'");
  return entries_[*idx];
}

ActivityCatalog::ActivityCatalog(std::vector<ActivityMeta> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ActivityMeta& e = entries_[i];
    if (e.activity_id.empty())
      throw ValidationError("activity #" + std::to_string(i + 1) + " has an empty activity_id");
    if (!index_.emplace(e.activity_id, i).second)
      throw ValidationError("duplicate activity_id '" + e.activity_id + "'");
  }
}

std::optional<std::size_t> ActivityCatalog::find(const std::string& activity_id) const {
  auto it = index_.find(activity_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CountMatrix::CountMatrix(std::vector<std::string> regions, std::vector<std::string> activities,
                         std::vector<Count> counts, std::vector<Count> region_totals, bool complete)
    : regions_(std::move(regions)),
      activities_(std::move(activities)),
      counts_(std::move(counts)),
      totals_(std::move(region_totals)),
      complete_(complete) {
  if (counts_.size() != regions_.size() * activities_.size())
    throw ArgumentError("count table size does not match regions x activities");
  if (totals_.size() != regions_.size()) throw ArgumentError("region_totals size does not match regions");
}

std::vector<Count> CountMatrix::column(std::size_t a) const {
  std::vector<Count> col(regions_.size());
  for (std::size_t r = 0; r < regions_.size(); ++r) col[r] = at(r, a);
  return col;
}

Count CountMatrix::row_sum(std::size_t r) const {
  auto row_view = row(r);
  return std::accumulate(row_view.begin(), row_view.end(), Count{0});
}

Count CountMatrix::column_sum(std::size_t a) const {
  Count sum = 0;
  for (std::size_t r = 0; r < regions_.size(); ++r) sum += at(r, a);
  return sum;
}

std::optional<std::size_t> CountMatrix::region_index(const std::string& region_id) const {
  auto it = std::find(regions_.begin(), regions_.end(), region_id);
  if (it == regions_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - regions_.begin());
}

std::optional<std::size_t> CountMatrix::activity_index(const std::string& activity_id) const {
  auto it = std::find(activities_.begin(), activities_.end(), activity_id);
  if (it == activities_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - activities_.begin());
}

CountMatrix CountMatrix::select_regions(std::span<const std::size_t> rows) const {
  std::vector<std::string> regions;
  std::vector<Count> counts;
  std::vector<Count> totals;
  regions.reserve(rows.size());
  counts.reserve(rows.size() * activities_.size());
  for (std::size_t r : rows) {
    regions.push_back(regions_.at(r));
    auto src = row(r);
    counts.insert(counts.end(), src.begin(), src.end());
    totals.push_back(totals_[r]);
  }
  return CountMatrix(std::move(regions), activities_, std::move(counts), std::move(totals), complete_);
}

RegionCatalog load_regions(const std::string& path) {
  auto records = csv::read_file(path);
  csv::expect_header(records, 0, {"region_id", "name", "province", "lat", "lon", "population", "included"},
                     path);
  std::vector<RegionMeta> entries;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    expect_width(rec, 7, path);
    RegionMeta meta;
    meta.region_id = rec.fields[0];
    meta.name = rec.fields[1];
    if (!rec.fields[2].empty()) meta.province = rec.fields[2];
    if (rec.fields[3].empty() != rec.fields[4].empty())
      throw ParseError(path, rec.line, "lat and lon must be both present or both empty");
    if (!rec.fields[3].empty()) {
      meta.latitude = csv::parse_double(rec.fields[3], path, rec.line, "lat");
      meta.longitude = csv::parse_double(rec.fields[4], path, rec.line, "lon");
    }
    meta.population = csv::parse_int(rec.fields[5], path, rec.line, "population");
    meta.included = parse_bool(rec.fields[6], path, rec.line);
    if (meta.region_id.empty()) throw ValidationError(path + ":" + std::to_string(rec.line) + ": empty region_id");
    if (meta.population < 0)
      throw ValidationError(path + ":" + std::to_string(rec.line) + ": negative population");
    entries.push_back(std::move(meta));
  }
  return RegionCatalog(std::move(entries));
}

ActivityCatalog load_activities(const std::string& path) {
  auto records = csv::read_file(path);
  csv::expect_header(records, 0, {"activity_id", "name"}, path);
  std::vector<ActivityMeta> entries;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    expect_width(rec, 2, path);
    entries.push_back({rec.fields[0], rec.fields[1]});
  }
  return ActivityCatalog(std::move(entries));
}

namespace {

// Totals rows keyed by catalog region index.
void read_totals(const std::vector<csv::Record>& records, std::size_t header, const std::string& source,
                 const RegionCatalog& regions, std::map<std::size_t, Count>& totals) {
  csv::expect_header(records, header, {"region_id", "total_players"}, source);
  for (std::size_t i = header + 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    expect_width(rec, 2, source);
    auto r = regions.find(rec.fields[0]);
    if (!r)
      throw IntegrityError(source + ":" + std::to_string(rec.line) + ": unknown region_id '" +
                           rec.fields[0] + "'");
    Count total = csv::parse_int(rec.fields[1], source, rec.line, "total_players");
    if (total < 0)
      throw ValidationError(source + ":" + std::to_string(rec.line) + ": negative total_players " +
                            rec.fields[1]);
    if (!totals.emplace(*r, total).second)
      throw ValidationError(source + ":" + std::to_string(rec.line) + ": duplicate total for region '" +
                            rec.fields[0] + "'");
  }
}

}  // namespace

Corpus load_corpus(const CorpusPaths& paths) {
  Corpus corpus;
  corpus.regions = load_regions(paths.regions);
  corpus.activities = load_activities(paths.activities);

  auto records = csv::read_file(paths.counts);
  csv::expect_header(records, 0, {"region_id", "activity_id", "count"}, paths.counts);

  std::optional<std::size_t> marker;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].fields.size() == 1 && records[i].fields[0] == kTotalsMarker) {
      marker = i;
      break;
    }
  }
  const std::size_t counts_end = marker.value_or(records.size());

  std::map<std::pair<std::size_t, std::size_t>, Count> cells;
  std::vector<bool> region_seen(corpus.regions.size(), false);
  std::vector<bool> activity_seen(corpus.activities.size(), false);
  for (std::size_t i = 1; i < counts_end; ++i) {
    const auto& rec = records[i];
    expect_width(rec, 3, paths.counts);
    const std::string where = paths.counts + ":" + std::to_string(rec.line) + ": ";
    auto r = corpus.regions.find(rec.fields[0]);
    if (!r) throw IntegrityError(where + "unknown region_id '" + rec.fields[0] + "'");
    auto a = corpus.activities.find(rec.fields[1]);
    if (!a) throw IntegrityError(where + "unknown activity_id '" + rec.fields[1] + "'");
    Count value = csv::parse_int(rec.fields[2], paths.counts, rec.line, "count");
    if (value < 0) throw ValidationError(where + "negative count " + rec.fields[2]);
    if (!cells.emplace(std::make_pair(*r, *a), value).second)
      throw ValidationError(where + "duplicate entry for (" + rec.fields[0] + ", " + rec.fields[1] + ")");
    region_seen[*r] = true;
    activity_seen[*a] = true;
  }

  std::map<std::size_t, Count> totals;
  if (marker) read_totals(records, *marker + 1, paths.counts, corpus.regions, totals);
  if (paths.totals) {
    auto extra = csv::read_file(*paths.totals);
    read_totals(extra, 0, *paths.totals, corpus.regions, totals);
  }
  for (const auto& [r, _] : totals) region_seen[r] = true;

  std::vector<std::size_t> region_rows;
  std::vector<std::size_t> activity_cols;
  std::vector<std::size_t> activity_pos(corpus.activities.size(), 0);
  for (std::size_t r = 0; r < region_seen.size(); ++r)
    if (region_seen[r]) region_rows.push_back(r);
  for (std::size_t a = 0; a < activity_seen.size(); ++a) {
    if (activity_seen[a]) {
      activity_pos[a] = activity_cols.size();
      activity_cols.push_back(a);
    }
  }

  std::vector<std::string> region_ids;
  std::vector<std::string> activity_ids;
  for (auto r : region_rows) region_ids.push_back(corpus.regions.entries()[r].region_id);
  for (auto a : activity_cols) activity_ids.push_back(corpus.activities.entries()[a].activity_id);

  const std::size_t n_act = activity_cols.size();
  std::vector<Count> counts(region_rows.size() * n_act, 0);
  std::vector<std::size_t> region_pos(corpus.regions.size(), 0);
  for (std::size_t i = 0; i < region_rows.size(); ++i) region_pos[region_rows[i]] = i;
  for (const auto& [key, value] : cells) counts[region_pos[key.first] * n_act + activity_pos[key.second]] = value;

  std::vector<Count> region_totals(region_rows.size(), 0);
  std::size_t derived = 0;
  for (std::size_t i = 0; i < region_rows.size(); ++i) {
    const std::string& id = region_ids[i];
    Count row_sum = 0;
    Count row_max = 0;
    for (std::size_t a = 0; a < n_act; ++a) {
      row_sum += counts[i * n_act + a];
      row_max = std::max(row_max, counts[i * n_act + a]);
    }
    auto it = totals.find(region_rows[i]);
    if (it == totals.end()) {
      if (paths.complete)
        throw ValidationError(paths.counts + ": missing total_players for region '" + id +
                              "' in a matrix declared complete");
      region_totals[i] = row_sum;
      ++derived;
      continue;
    }
    region_totals[i] = it->second;
    if (paths.complete && it->second < row_sum)
      throw ValidationError(paths.counts + ": total_players for region '" + id + "' (" +
                            std::to_string(it->second) + ") is below its row sum " + std::to_string(row_sum));
    if (it->second < row_max)
      throw ValidationError(paths.counts + ": total_players for region '" + id + "' (" +
                            std::to_string(it->second) + ") is below its largest count " +
                            std::to_string(row_max));
  }
  if (derived > 0) {
    corpus.warnings.push_back(std::to_string(derived) +
                              " region(s) have no total_players; their row sums are used instead");
  }

  corpus.matrix = CountMatrix(std::move(region_ids), std::move(activity_ids), std::move(counts),
                              std::move(region_totals), paths.complete);
  if (corpus.matrix.n_regions() == 0 || corpus.matrix.n_activities() == 0) {
    corpus.warnings.push_back("count matrix has zero dimension (" + std::to_string(corpus.matrix.n_regions()) +
                              " regions x " + std::to_string(corpus.matrix.n_activities()) + " activities)");
  }
  return corpus;
}

void write_corpus(const std::string& dir, const CountMatrix& matrix, const RegionCatalog& regions,
                  const ActivityCatalog& activities) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "regions.csv");
    out << "region_id,name,province,lat,lon,population,included\n";
    for (const auto& e : regions.entries()) {
      csv::write_row(out, {e.region_id, e.name, e.province.value_or(""),
                           e.latitude ? format_double(*e.latitude) : "",
                           e.longitude ? format_double(*e.longitude) : "", std::to_string(e.population),
                           e.included ? "true" : "false"});
    }
    if (!out) throw Error("failed writing regions.csv in '" + dir + "'");
  }
  {
    std::ofstream out(fs::path(dir) / "activities.csv");
    out << "activity_id,name\n";
    for (const auto& e : activities.entries()) csv::write_row(out, {e.activity_id, e.name});
    if (!out) throw Error("failed writing activities.csv in '" + dir + "'");
  }
  {
    std::ofstream out(fs::path(dir) / "counts.csv");
    out << "region_id,activity_id,count\n";
    for (std::size_t r = 0; r < matrix.n_regions(); ++r)
      for (std::size_t a = 0; a < matrix.n_activities(); ++a)
        csv::write_row(out, {matrix.regions()[r], matrix.activities()[a], std::to_string(matrix.at(r, a))});
    out << kTotalsMarker << "\n";
    out << "region_id,total_players\n";
    for (std::size_t r = 0; r < matrix.n_regions(); ++r)
      csv::write_row(out, {matrix.regions()[r], std::to_string(matrix.region_totals()[r])});
    if (!out) throw Error("failed writing counts.csv in '" + dir + "'");
  }
}

void validate(const CountMatrix& matrix, const RegionCatalog& regions, const ActivityCatalog& activities) {
  std::optional<std::size_t> prev;
  for (const auto& id : matrix.regions()) {
    auto idx = regions.find(id);
    if (!idx) throw IntegrityError("matrix region '" + id + "' is not in the region catalog");
    if (prev && *idx <= *prev) throw IntegrityError("matrix region order does not follow the catalog at '" + id + "'");
    prev = idx;
  }
  prev.reset();
  for (const auto& id : matrix.activities()) {
    auto idx = activities.find(id);
    if (!idx) throw IntegrityError("matrix activity '" + id + "' is not in the activity catalog");
    if (prev && *idx <= *prev)
      throw IntegrityError("matrix activity order does not follow the catalog at '" + id + "'");
    prev = idx;
  }
  for (std::size_t r = 0; r < matrix.n_regions(); ++r) {
    Count row_max = 0;
    for (std::size_t a = 0; a < matrix.n_activities(); ++a) {
      if (matrix.at(r, a) < 0)
        throw ValidationError("negative count at (" + matrix.regions()[r] + ", " + matrix.activities()[a] + ")");
      row_max = std::max(row_max, matrix.at(r, a));
    }
    const Count total = matrix.region_totals()[r];
    if (total < row_max) throw ValidationError("region '" + matrix.regions()[r] + "': total below its largest count");
    if (matrix.complete() && total < matrix.row_sum(r))
      throw ValidationError("region '" + matrix.regions()[r] + "': total below its row sum in a complete matrix");
  }
}

FilterResult filter_regions(const CountMatrix& matrix, const RegionCatalog& catalog) {
  FilterResult result;
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < matrix.n_regions(); ++r) {
    const RegionMeta& meta = catalog.at(matrix.regions()[r]);
    if (meta.included) keep.push_back(r);
    else result.removed.push_back(meta.region_id);
  }
  result.matrix = matrix.select_regions(keep);
  if (keep.empty() && matrix.n_regions() > 0)
    result.warnings.push_back("all " + std::to_string(matrix.n_regions()) + " regions are excluded");
  return result;
}

std::vector<RegionSummary> region_summaries(const CountMatrix& matrix, const RegionCatalog& catalog) {
  const auto& totals = matrix.region_totals();
  const double national = static_cast<double>(std::accumulate(totals.begin(), totals.end(), Count{0}));

  std::vector<RegionSummary> out;
  out.reserve(matrix.n_regions());
  for (std::size_t r = 0; r < matrix.n_regions(); ++r) {
    const RegionMeta& meta = catalog.at(matrix.regions()[r]);
    RegionSummary s;
    s.region_id = meta.region_id;
    s.players = totals[r];
    s.population = meta.population;
    if (meta.population > 0)
      s.percent_of_population = static_cast<double>(s.players) / static_cast<double>(meta.population);
    s.share_of_national = national > 0 ? static_cast<double>(s.players) / national : 0.0;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const RegionSummary& a, const RegionSummary& b) {
    if (a.players != b.players) return a.players > b.players;
    return a.region_id < b.region_id;
  });
  return out;
}

double top_national_share(const std::vector<RegionSummary>& summaries, std::size_t n) {
  double share = 0.0;
  for (std::size_t i = 0; i < std::min(n, summaries.size()); ++i) share += summaries[i].share_of_national;
  return share;
}

}  // namespace regioncluster
