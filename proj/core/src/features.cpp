#include "actimetry/features.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>

#include "actimetry/csv.hpp"
#include "actimetry/entropy.hpp"
#include "actimetry/error.hpp"
#include "actimetry/missing.hpp"
#include "actimetry/stats.hpp"

namespace actimetry {

const char* to_string(Method m) {
  switch (m) {
    case Method::Mean: return "mean";
    case Method::Max: return "max";
    case Method::Min: return "min";
    case Method::Range: return "range";
    case Method::Std: return "std";
    case Method::Variance: return "variance";
    case Method::Cv: return "cv";
    case Method::P1: return "p1";
    case Method::P5: return "p5";
    case Method::P25: return "p25";
    case Method::P50: return "p50";
    case Method::P75: return "p75";
    case Method::P95: return "p95";
    case Method::P99: return "p99";
    case Method::FuzzyEn: return "fuzzy_en";
    case Method::DistEn: return "dist_en";
    case Method::SvdEn: return "svd_en";
    case Method::PermEn: return "perm_en";
    case Method::PhaseEn: return "phase_en";
  }
  return "?";
}

bool is_entropy(Method m) { return static_cast<int>(m) >= static_cast<int>(Method::FuzzyEn); }

const char* to_string(Aggregation a) { return a == Aggregation::Mean ? "mean" : "std"; }

namespace {

EntropyParams fuzzy_set(int m, double r) { return {.m = m, .tau = 1, .r = r, .n = 2.0}; }
EntropyParams embed(int m, int tau) { return {.m = m, .tau = tau}; }
EntropyParams dist_set(int m, int bins) { return {.m = m, .bins = bins}; }
EntropyParams phase_set(int sectors, int tau) { return {.tau = tau, .sectors = sectors}; }

std::string param_tag(Method method, const EntropyParams& p) {
  const auto num = [](double v) { return csv::format_number(v); };
  switch (method) {
    case Method::FuzzyEn: {
      std::string tag = "m" + std::to_string(p.m) + "_r" + num(p.r);
      if (p.n != 2.0) tag += "_n" + num(p.n);
      if (p.tau != 1) tag += "_tau" + std::to_string(p.tau);
      return tag;
    }
    case Method::DistEn:
      return "m" + std::to_string(p.m) + "_b" + std::to_string(p.bins);
    case Method::SvdEn:
    case Method::PermEn:
      return "m" + std::to_string(p.m) + "_tau" + std::to_string(p.tau);
    case Method::PhaseEn:
      return "k" + std::to_string(p.sectors) + "_tau" + std::to_string(p.tau);
    default:
      return {};
  }
}

void validate_sets(const std::vector<EntropyParams>& sets, Method method) {
  const std::string what = to_string(method);
  if (sets.size() != kParamSetsPerEntropy) {
    throw ConfigError(what + ": expected " + std::to_string(kParamSetsPerEntropy) +
                      " parameter sets, got " + std::to_string(sets.size()));
  }
  std::set<std::string> tags;
  for (const auto& p : sets) {
    bool ok = true;
    switch (method) {
      case Method::FuzzyEn: ok = p.m >= 1 && p.tau >= 1 && p.r > 0.0 && p.n > 0.0; break;
      case Method::DistEn: ok = p.m >= 1 && p.bins >= 2; break;
      case Method::SvdEn:
      case Method::PermEn: ok = p.m >= 2 && p.tau >= 1; break;
      case Method::PhaseEn: ok = p.sectors >= 2 && p.tau >= 1; break;
      default: break;
    }
    if (!ok) throw ConfigError(what + ": invalid parameter set " + param_tag(method, p));
    if (!tags.insert(param_tag(method, p)).second) {
      throw ConfigError(what + ": duplicate parameter set " + param_tag(method, p));
    }
  }
}

}  // namespace

FeatureGrid FeatureGrid::defaults() {
  FeatureGrid g;
  for (int m : {1, 2}) {
    for (double r : {0.10, 0.15, 0.20, 0.25, 0.30}) g.fuzzy.push_back(fuzzy_set(m, r));
  }
  for (int m : {3, 4, 5, 6, 7}) {
    for (int tau : {1, 2}) {
      g.perm.push_back(embed(m, tau));
      g.svd.push_back(embed(m, tau));
    }
  }
  for (int m : {2, 3}) {
    for (int bins : {64, 128, 256, 512, 1024}) g.dist.push_back(dist_set(m, bins));
  }
  for (int sectors : {4, 8, 16, 32, 64}) {
    for (int tau : {1, 2}) g.phase.push_back(phase_set(sectors, tau));
  }
  return g;
}

void FeatureGrid::validate() const {
  validate_sets(fuzzy, Method::FuzzyEn);
  validate_sets(dist, Method::DistEn);
  validate_sets(svd, Method::SvdEn);
  validate_sets(perm, Method::PermEn);
  validate_sets(phase, Method::PhaseEn);
}

std::string BaseFeature::tag() const {
  std::string t = to_string(method);
  if (is_entropy(method)) t += "." + param_tag(method, params);
  return t;
}

double BaseFeature::evaluate(std::span<const double> segment) const {
  switch (method) {
    case Method::FuzzyEn: return fuzzy_entropy(segment, params.m, params.r, params.n, params.tau);
    case Method::DistEn: return dist_entropy(segment, params.m, params.bins);
    case Method::SvdEn: return svd_entropy(segment, params.m, params.tau);
    case Method::PermEn: return perm_entropy(segment, params.m, params.tau);
    case Method::PhaseEn: return phase_entropy(segment, params.sectors, params.tau);
    default: return stat_features(segment)[static_cast<std::size_t>(method)];
  }
}

std::vector<BaseFeature> base_features(const FeatureGrid& grid) {
  std::vector<BaseFeature> out;
  for (int i = 0; i < static_cast<int>(kStatFeatureCount); ++i) {
    out.push_back({static_cast<Method>(i), {}});
  }
  for (const auto& p : grid.fuzzy) out.push_back({Method::FuzzyEn, p});
  for (const auto& p : grid.dist) out.push_back({Method::DistEn, p});
  for (const auto& p : grid.svd) out.push_back({Method::SvdEn, p});
  for (const auto& p : grid.perm) out.push_back({Method::PermEn, p});
  for (const auto& p : grid.phase) out.push_back({Method::PhaseEn, p});
  return out;
}

std::string FeatureSpec::name() const {
  return std::string(group == SegmentKind::Activity ? "activity" : "rest") + "." +
         to_string(aggregation) + "." + base.tag();
}

std::vector<FeatureSpec> feature_specs(const FeatureGrid& grid) {
  std::vector<FeatureSpec> specs;
  for (const auto& base : base_features(grid)) {
    for (auto group : {SegmentKind::Activity, SegmentKind::Rest}) {
      for (auto agg : {Aggregation::Mean, Aggregation::Std}) specs.push_back({base, agg, group});
    }
  }
  std::vector<std::string> names;
  names.reserve(specs.size());
  for (const auto& s : specs) names.push_back(s.name());
  std::vector<std::size_t> order(specs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return names[a] < names[b]; });
  std::vector<FeatureSpec> sorted;
  sorted.reserve(specs.size());
  for (auto i : order) sorted.push_back(specs[i]);
  return sorted;
}

std::vector<std::string> feature_names(const FeatureGrid& grid) {
  std::vector<std::string> names;
  for (const auto& s : feature_specs(grid)) names.push_back(s.name());
  return names;
}

std::vector<double> evaluate_base_features(std::span<const double> segment,
                                           const FeatureGrid& grid) {
  std::vector<double> out;
  out.reserve(kBaseFeatureCount);
  const auto stats = stat_features(segment);
  out.insert(out.end(), stats.begin(), stats.end());

  // Fuzzy sets sharing (m, n, tau) reuse one distance pass.
  std::vector<double> fuzzy_vals(grid.fuzzy.size(), kMissing);
  std::map<std::tuple<int, double, int>, std::vector<std::size_t>> fuzzy_groups;
  for (std::size_t i = 0; i < grid.fuzzy.size(); ++i) {
    const auto& p = grid.fuzzy[i];
    fuzzy_groups[{p.m, p.n, p.tau}].push_back(i);
  }
  for (const auto& [key, idx] : fuzzy_groups) {
    std::vector<double> rs;
    for (auto i : idx) rs.push_back(grid.fuzzy[i].r);
    const auto vals = fuzzy_entropy_grid(segment, std::get<0>(key), rs, std::get<1>(key),
                                         std::get<2>(key));
    for (std::size_t k = 0; k < idx.size(); ++k) fuzzy_vals[idx[k]] = vals[k];
  }
  out.insert(out.end(), fuzzy_vals.begin(), fuzzy_vals.end());

  std::vector<double> dist_vals(grid.dist.size(), kMissing);
  std::map<int, std::vector<std::size_t>> dist_groups;
  for (std::size_t i = 0; i < grid.dist.size(); ++i) dist_groups[grid.dist[i].m].push_back(i);
  for (const auto& [m, idx] : dist_groups) {
    std::vector<int> bins;
    for (auto i : idx) bins.push_back(grid.dist[i].bins);
    const auto vals = dist_entropy_grid(segment, m, bins);
    for (std::size_t k = 0; k < idx.size(); ++k) dist_vals[idx[k]] = vals[k];
  }
  out.insert(out.end(), dist_vals.begin(), dist_vals.end());

  for (const auto& p : grid.svd) out.push_back(svd_entropy(segment, p.m, p.tau));
  for (const auto& p : grid.perm) out.push_back(perm_entropy(segment, p.m, p.tau));
  for (const auto& p : grid.phase) out.push_back(phase_entropy(segment, p.sectors, p.tau));
  return out;
}

SegmentSeries per_segment_series(const Segmentation& seg, SegmentKind group,
                                 const BaseFeature& feature) {
  SegmentSeries ts;
  for (const auto& s : seg.segments) {
    if (s.kind != group) continue;
    const double v = feature.evaluate(seg.values(s));
    if (is_missing(v)) {
      ++ts.dropped;
    } else {
      ts.values.push_back(v);
    }
  }
  return ts;
}

Aggregate aggregate(std::span<const double> ts) {
  if (ts.empty()) return {kMissing, kMissing};
  return {mean(ts), sample_std(ts)};
}

double FeatureVector::at(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw ConfigError("unknown feature '" + std::string(name) + "'");
}

FeatureVector extract_all(const Segmentation& seg, const FeatureGrid& grid) {
  grid.validate();
  const auto bases = base_features(grid);
  std::map<std::string, double> by_name;
  for (auto group : {SegmentKind::Activity, SegmentKind::Rest}) {
    std::vector<std::vector<double>> ts(bases.size());
    for (const auto& s : seg.segments) {
      if (s.kind != group) continue;
      const auto vals = evaluate_base_features(seg.values(s), grid);
      for (std::size_t j = 0; j < vals.size(); ++j) {
        if (!is_missing(vals[j])) ts[j].push_back(vals[j]);
      }
    }
    for (std::size_t j = 0; j < bases.size(); ++j) {
      const auto agg = aggregate(ts[j]);
      by_name[FeatureSpec{bases[j], Aggregation::Mean, group}.name()] = agg.mean;
      by_name[FeatureSpec{bases[j], Aggregation::Std, group}.name()] = agg.std;
    }
  }
  if (by_name.size() != kActimetricFeatureCount) {
    throw ConfigError("feature grid produced " + std::to_string(by_name.size()) +
                      " distinct feature names");
  }
  FeatureVector fv;
  fv.participant_id = seg.participant_id;
  for (const auto& [name, value] : by_name) {
    fv.names.push_back(name);
    fv.values.push_back(value);
  }
  return fv;
}

std::size_t FeatureTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ConfigError("unknown feature column '" + std::string(name) + "'");
}

std::size_t FeatureTable::row_index(std::string_view participant_id) const {
  for (std::size_t i = 0; i < participant_ids.size(); ++i) {
    if (participant_ids[i] == participant_id) return i;
  }
  throw ConfigError("no feature row for participant '" + std::string(participant_id) + "'");
}

FeatureTable make_feature_table(std::span<const FeatureVector> vectors) {
  FeatureTable t;
  if (vectors.empty()) return t;
  t.columns = vectors.front().names;
  for (const auto& v : vectors) {
    if (v.names != t.columns) throw ConfigError("feature vectors disagree on column layout");
    t.participant_ids.push_back(v.participant_id);
    t.rows.push_back(v.values);
  }
  return t;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  out << "participant_id";
  for (const auto& c : table.columns) out << ',' << csv::escape(c);
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << csv::escape(table.participant_ids[r]);
    for (double v : table.rows[r]) out << ',' << csv::format_number(v);
    out << '\n';
  }
}

FeatureTable read_feature_csv(std::istream& in, const std::string& source) {
  const auto csv_table = csv::read(in, source);
  if (csv_table.header.empty() || csv_table.header.front() != "participant_id") {
    throw FormatError(source + ": first column must be participant_id");
  }
  FeatureTable t;
  t.columns.assign(csv_table.header.begin() + 1, csv_table.header.end());
  for (std::size_t r = 0; r < csv_table.rows.size(); ++r) {
    const auto& row = csv_table.rows[r];
    t.participant_ids.push_back(row.front());
    std::vector<double> vals;
    vals.reserve(t.columns.size());
    for (std::size_t c = 1; c < row.size(); ++c) {
      vals.push_back(row[c].empty() ? kMissing : csv::parse_number(row[c], csv_table.where(r)));
    }
    t.rows.push_back(std::move(vals));
  }
  return t;
}

FeatureTable read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return read_feature_csv(in, path.string());
}

}  // namespace actimetry
