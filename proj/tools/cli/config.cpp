#include "config.hpp"

#include <fstream>
#include <set>

#include <actimetry/error.hpp>

namespace actimetry::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const char* to_string(LogLevel l) {
  switch (l) {
    case LogLevel::Quiet: return "quiet";
    case LogLevel::Debug: return "debug";
    default: return "info";
  }
}

LogLevel log_level_from_string(const std::string& s) {
  if (s == "quiet") return LogLevel::Quiet;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  throw ConfigError("unknown log_level '" + s + "'");
}

const char* to_string(InputFormat f) { return f == InputFormat::RawCsv ? "raw" : "minute"; }

InputFormat input_format_from_string(const std::string& s) {
  if (s == "minute") return InputFormat::MinuteCsv;
  if (s == "raw") return InputFormat::RawCsv;
  throw ConfigError("unknown input format '" + s + "'");
}

const char* to_string(CpdKernel k) { return k == CpdKernel::Linear ? "linear" : "rbf"; }

CpdKernel kernel_from_string(const std::string& s) {
  if (s == "rbf") return CpdKernel::Rbf;
  if (s == "linear") return CpdKernel::Linear;
  throw ConfigError("unknown cpd_kernel '" + s + "'");
}

const char* to_string(ThresholdSource t) { return t == ThresholdSource::Raw ? "raw" : "smoothed"; }

ThresholdSource threshold_source_from_string(const std::string& s) {
  if (s == "smoothed") return ThresholdSource::Smoothed;
  if (s == "raw") return ThresholdSource::Raw;
  throw ConfigError("unknown threshold_source '" + s + "'");
}

// Reads typed members of one object and rejects keys it never consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + " must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!key.starts_with("_") && !seen_.contains(key)) {
        throw ConfigError("unknown config key " + path_ + "." + key);
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ordered_json params_json(const EntropyParams& p) {
  return {{"m", p.m}, {"tau", p.tau}, {"r", p.r}, {"n", p.n}, {"bins", p.bins}, {"sectors", p.sectors}};
}

EntropyParams params_from_json(const json& j, const std::string& path) {
  EntropyParams p;
  Section s(j, path);
  s.get("m", p.m);
  s.get("tau", p.tau);
  s.get("r", p.r);
  s.get("n", p.n);
  s.get("bins", p.bins);
  s.get("sectors", p.sectors);
  s.finish();
  return p;
}

std::vector<EntropyParams> params_list(const json* j, const std::string& path,
                                       std::vector<EntropyParams> fallback) {
  if (!j) return fallback;
  if (!j->is_array()) throw ConfigError(path + " must be an array");
  std::vector<EntropyParams> out;
  for (std::size_t i = 0; i < j->size(); ++i) {
    out.push_back(params_from_json((*j)[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ordered_json segmentation_json(const SegmentationConfig& c) {
  return {{"smoothing_window", c.smoothing_window},
          {"max_inactivity", c.max_inactivity},
          {"threshold_factor", c.threshold_factor},
          {"threshold_source", to_string(c.threshold_source)},
          {"min_rest", c.min_rest},
          {"min_activity", c.min_activity},
          {"cpd_kernel", to_string(c.cpd_kernel)},
          {"cpd_penalty", c.cpd_penalty},
          {"rbf_bandwidth", c.rbf_bandwidth}};
}

ordered_json synth_json(const SynthConfig& c) {
  ordered_json effects = ordered_json::object();
  for (const auto& [label, e] : c.class_effect) {
    effects[std::to_string(label)] = {{"amplitude_variability", e.amplitude_variability},
                                      {"fragmentation", e.fragmentation}};
  }
  return {{"n_subjects", c.n_subjects},
          {"fa_positive", c.fa_positive},
          {"sc_class_counts", c.sc_class_counts},
          {"days", c.days},
          {"active_hours", c.active_hours},
          {"mesor", c.mesor},
          {"day_amplitude", c.day_amplitude},
          {"amplitude_variability", c.amplitude_variability},
          {"noise_sd", c.noise_sd},
          {"fragmentation", c.fragmentation},
          {"inversion_min_minutes", c.inversion_min_minutes},
          {"inversion_max_minutes", c.inversion_max_minutes},
          {"effect_target", actimetry::to_string(c.effect_target)},
          {"class_effect", effects},
          {"subjective_class_correlation", c.subjective_class_correlation},
          {"missing_bmi", c.missing_bmi},
          {"seed", c.seed},
          {"start_time", c.start_time}};
}

ordered_json docs_input() {
  return {{"actigrams", "actigram CSV file or directory of CSV files"},
          {"format", "minute (participant_id,timestamp_iso8601,count) or raw (participant_id,t_seconds,x,y at 1 Hz)"},
          {"subjects", "subject CSV with demographic, questionnaire and label columns"},
          {"features", "optional precomputed feature CSV used by evaluate, select and correlate"}};
}

ordered_json docs_segmentation() {
  return {{"smoothing_window", "centered moving-average window in minutes"},
          {"max_inactivity", "zero-count runs longer than this many minutes are removed"},
          {"threshold_factor", "activity threshold as a fraction of the median"},
          {"threshold_source", "curve the median is taken from: smoothed or raw"},
          {"min_rest", "rest segments shorter than this many minutes are absorbed"},
          {"min_activity", "activity segments shorter than this many minutes are absorbed"},
          {"cpd_kernel", "rbf or linear"},
          {"cpd_penalty", "penalty per added segment"},
          {"rbf_bandwidth", "kernel bandwidth; 0 selects the median heuristic"}};
}

ordered_json docs_model() {
  return {{"k_neighbors", "neighbours voting in KNN"},
          {"k_grid", "candidate k values for sweeps"},
          {"leakage", "fold_safe fits imputation and scaling per fold; global fits them once"},
          {"selection_max_size", "largest feature subset forward selection may return"},
          {"target", "fa or sc"},
          {"group", "activity, rest, both, subjective or all"},
          {"features", "fixed feature subset for evaluate; empty uses every column of the group"}};
}

}  // namespace

void RunConfig::validate() const {
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  segmentation.validate();
  features.validate();
  model.validate();
  synth.validate();
}

ordered_json to_json(const FeatureGrid& g) {
  auto list = [](const std::vector<EntropyParams>& v) {
    ordered_json a = ordered_json::array();
    for (const auto& p : v) a.push_back(params_json(p));
    return a;
  };
  return {{"fuzzy", list(g.fuzzy)}, {"dist", list(g.dist)}, {"svd", list(g.svd)},
          {"perm", list(g.perm)},   {"phase", list(g.phase)}};
}

ordered_json to_json(const RunConfig& c, bool with_docs) {
  ordered_json j;
  if (with_docs) {
    j["_doc"] = "actimetry run configuration; keys starting with '_' are ignored";
  }
  ordered_json input = {{"actigrams", c.input.actigrams},
                        {"format", to_string(c.input.format)},
                        {"subjects", c.input.subjects},
                        {"features", c.input.features}};
  if (with_docs) input["_doc"] = docs_input();
  j["input"] = input;
  j["output_dir"] = c.output_dir;
  j["log_level"] = to_string(c.log_level);
  j["jobs"] = c.jobs;
  auto seg = segmentation_json(c.segmentation);
  if (with_docs) seg["_doc"] = docs_segmentation();
  j["segmentation"] = seg;
  auto features = to_json(c.features);
  if (with_docs) {
    features["_doc"] = "ten parameter sets per entropy; each set lists m, tau, r, n, bins, sectors";
  }
  j["features"] = features;
  ordered_json model = {{"k_neighbors", c.model.k_neighbors},
                        {"k_grid", c.model.k_grid},
                        {"leakage", actimetry::to_string(c.model.leakage)},
                        {"selection_max_size", c.model.selection_max_size},
                        {"target", actimetry::to_string(c.model.target)},
                        {"group", actimetry::to_string(c.group)},
                        {"features", c.model_features}};
  if (with_docs) model["_doc"] = docs_model();
  j["model"] = model;
  ordered_json corr = {{"features", c.correlate_features}};
  if (with_docs) corr["_doc"] = "table rows; empty uses every actimetric column";
  j["correlate"] = corr;
  auto synth = synth_json(c.synth);
  if (with_docs) {
    synth["_doc"] = "synthetic cohort; class_effect maps a label of effect_target to multipliers";
  }
  j["synth"] = synth;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section root(j, "config");
  if (const auto* in = root.child("input")) {
    Section s(*in, "input");
    std::string format = to_string(c.input.format);
    s.get("actigrams", c.input.actigrams);
    s.get("format", format);
    s.get("subjects", c.input.subjects);
    s.get("features", c.input.features);
    s.finish();
    c.input.format = input_format_from_string(format);
  }
  root.get("output_dir", c.output_dir);
  std::string level = to_string(c.log_level);
  root.get("log_level", level);
  c.log_level = log_level_from_string(level);
  root.get("jobs", c.jobs);

  if (const auto* seg = root.child("segmentation")) {
    Section s(*seg, "segmentation");
    auto& g = c.segmentation;
    std::string source = to_string(g.threshold_source);
    std::string kernel = to_string(g.cpd_kernel);
    s.get("smoothing_window", g.smoothing_window);
    s.get("max_inactivity", g.max_inactivity);
    s.get("threshold_factor", g.threshold_factor);
    s.get("threshold_source", source);
    s.get("min_rest", g.min_rest);
    s.get("min_activity", g.min_activity);
    s.get("cpd_kernel", kernel);
    s.get("cpd_penalty", g.cpd_penalty);
    s.get("rbf_bandwidth", g.rbf_bandwidth);
    s.finish();
    g.threshold_source = threshold_source_from_string(source);
    g.cpd_kernel = kernel_from_string(kernel);
  }

  if (const auto* f = root.child("features")) {
    Section s(*f, "features");
    c.features.fuzzy = params_list(s.child("fuzzy"), "features.fuzzy", c.features.fuzzy);
    c.features.dist = params_list(s.child("dist"), "features.dist", c.features.dist);
    c.features.svd = params_list(s.child("svd"), "features.svd", c.features.svd);
    c.features.perm = params_list(s.child("perm"), "features.perm", c.features.perm);
    c.features.phase = params_list(s.child("phase"), "features.phase", c.features.phase);
    s.finish();
  }

  if (const auto* m = root.child("model")) {
    Section s(*m, "model");
    std::string leakage = actimetry::to_string(c.model.leakage);
    std::string target = actimetry::to_string(c.model.target);
    std::string group = actimetry::to_string(c.group);
    s.get("k_neighbors", c.model.k_neighbors);
    s.get("k_grid", c.model.k_grid);
    s.get("leakage", leakage);
    s.get("selection_max_size", c.model.selection_max_size);
    s.get("target", target);
    s.get("group", group);
    s.get("features", c.model_features);
    s.finish();
    c.model.leakage = leakage_mode_from_string(leakage);
    c.model.target = target_from_string(target);
    c.group = feature_group_from_string(group);
  }

  if (const auto* corr = root.child("correlate")) {
    Section s(*corr, "correlate");
    s.get("features", c.correlate_features);
    s.finish();
  }

  if (const auto* sy = root.child("synth")) {
    Section s(*sy, "synth");
    auto& g = c.synth;
    std::string target = actimetry::to_string(g.effect_target);
    s.get("n_subjects", g.n_subjects);
    s.get("fa_positive", g.fa_positive);
    s.get("sc_class_counts", g.sc_class_counts);
    s.get("days", g.days);
    s.get("active_hours", g.active_hours);
    s.get("mesor", g.mesor);
    s.get("day_amplitude", g.day_amplitude);
    s.get("amplitude_variability", g.amplitude_variability);
    s.get("noise_sd", g.noise_sd);
    s.get("fragmentation", g.fragmentation);
    s.get("inversion_min_minutes", g.inversion_min_minutes);
    s.get("inversion_max_minutes", g.inversion_max_minutes);
    s.get("effect_target", target);
    s.get("subjective_class_correlation", g.subjective_class_correlation);
    s.get("missing_bmi", g.missing_bmi);
    s.get("seed", g.seed);
    s.get("start_time", g.start_time);
    if (const auto* effects = s.child("class_effect")) {
      if (!effects->is_object()) throw ConfigError("synth.class_effect must be an object");
      for (const auto& [key, value] : effects->items()) {
        if (key.starts_with("_")) continue;
        int label = 0;
        try {
          std::size_t used = 0;
          label = std::stoi(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::logic_error&) {
          throw ConfigError("synth.class_effect key '" + key + "' is not a class label");
        }
        ClassEffect e;
        Section es(value, "synth.class_effect." + key);
        es.get("amplitude_variability", e.amplitude_variability);
        es.get("fragmentation", e.fragmentation);
        es.finish();
        g.class_effect[label] = e;
      }
    }
    s.finish();
    g.effect_target = target_from_string(target);
  }
  root.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

ordered_json to_json(const ConfusionMatrix& cm) {
  return {{"labels", cm.labels}, {"counts", cm.counts}};
}

ConfusionMatrix confusion_from_json(const json& j) {
  try {
    return ConfusionMatrix(j.at("labels").get<std::vector<int>>(),
                           j.at("counts").get<std::vector<std::vector<long long>>>());
  } catch (const json::exception& e) {
    throw FormatError(std::string("confusion matrix JSON: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(e.what());
  }
}

ordered_json to_json(const EvalReport& r) {
  ordered_json per_class = ordered_json::array();
  for (const auto& c : r.per_class) {
    per_class.push_back({{"label", c.label},
                         {"sensitivity", c.sensitivity},
                         {"specificity", c.specificity},
                         {"precision", c.precision},
                         {"f1", c.f1}});
  }
  return {{"mcc", r.mcc},         {"accuracy", r.accuracy},     {"confusion", to_json(r.confusion)},
          {"per_class", per_class}, {"pooled", r.pooled}, {"degenerate", r.degenerate}};
}

}  // namespace actimetry::cli
