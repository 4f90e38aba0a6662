#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <actimetry/correlate.hpp>
#include <actimetry/error.hpp>
#include <actimetry/features.hpp>
#include <actimetry/ingest.hpp>
#include <actimetry/metrics.hpp>
#include <actimetry/model.hpp>
#include <actimetry/parallel.hpp>
#include <actimetry/segmentation.hpp>
#include <actimetry/synth.hpp>

#include "config.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace actimetry::cli {

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  bool svg = false;
  unsigned jobs = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string group;
  std::string target;
  std::string input;
};

class Context {
 public:
  Context(RunConfig cfg, std::ostream& out, std::ostream& err) : cfg(std::move(cfg)), out(out), err(err) {}

  void info(const std::string& msg) const {
    if (cfg.log_level != LogLevel::Quiet) err << "[info] " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (cfg.log_level == LogLevel::Debug) err << "[debug] " << msg << '\n';
  }

  fs::path output(const std::string& name) const {
    fs::create_directories(cfg.output_dir);
    return fs::path(cfg.output_dir) / name;
  }

  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::map<std::string, ActigramSeries> load_actigrams(const Context& ctx) {
  const auto& path = ctx.cfg.input.actigrams;
  if (path.empty()) throw ConfigError("input.actigrams is required");
  if (!fs::exists(path)) throw FormatError("input.actigrams '" + path + "' does not exist");
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::map<std::string, ActigramSeries> all;
  for (const auto& f : files) {
    for (auto& [id, series] : parse_actigrams(f, ctx.cfg.input.format)) {
      if (!all.emplace(id, std::move(series)).second) {
        throw FormatError(f.string() + ": participant '" + id + "' appears in more than one file");
      }
    }
  }
  if (all.empty()) throw EmptyDataError("no actigram data found in '" + path + "'");
  ctx.info("read " + std::to_string(all.size()) + " actigram series");
  return all;
}

std::vector<SubjectRecord> load_subjects(const Context& ctx) {
  const auto& path = ctx.cfg.input.subjects;
  if (path.empty()) throw ConfigError("input.subjects is required");
  if (!fs::exists(path)) throw FormatError("input.subjects '" + path + "' does not exist");
  auto subjects = parse_subjects(fs::path(path));
  if (subjects.empty()) throw EmptyDataError("no subjects in '" + path + "'");
  return subjects;
}

std::vector<Segmentation> segment_all(const Context& ctx, const std::map<std::string, ActigramSeries>& series) {
  std::vector<const ActigramSeries*> items;
  for (const auto& [id, s] : series) items.push_back(&s);
  std::vector<Segmentation> out(items.size());
  parallel_for(items.size(), ctx.cfg.jobs, [&](std::size_t i) {
    try {
      out[i] = segment_pipeline(*items[i], ctx.cfg.segmentation);
    } catch (const EmptyDataError& e) {
      throw EmptyDataError(items[i]->participant_id + ": " + e.what());
    }
  });
  return out;
}

FeatureTable extract_table(const Context& ctx, const std::vector<Segmentation>& segs) {
  std::vector<FeatureVector> vectors(segs.size());
  parallel_for(segs.size(), ctx.cfg.jobs, [&](std::size_t i) { vectors[i] = extract_all(segs[i], ctx.cfg.features); });
  return make_feature_table(vectors);
}

FeatureTable obtain_features(const Context& ctx) {
  if (!ctx.cfg.input.features.empty()) {
    if (!fs::exists(ctx.cfg.input.features)) {
      throw FormatError("input.features '" + ctx.cfg.input.features + "' does not exist");
    }
    return read_feature_csv(fs::path(ctx.cfg.input.features));
  }
  const auto series = load_actigrams(ctx);
  return extract_table(ctx, segment_all(ctx, series));
}

void require_two_classes(const ModelData& data, Target target) {
  std::vector<int> labels(data.y);
  std::sort(labels.begin(), labels.end());
  if (labels.empty() || labels.front() == labels.back()) {
    throw DegenerateLabelsError(std::string("target ") + to_string(target) + " has fewer than two classes");
  }
}

std::string run_tag(const RunConfig& cfg) {
  return std::string(to_string(cfg.model.target)) + "_" + to_string(cfg.group);
}

// Commands.

void cmd_synth(const Context& ctx) {
  const auto cohort = generate_cohort(ctx.cfg.synth);
  std::ostringstream act, subj, truth;
  bool header = true;
  for (const auto& [id, s] : cohort.dataset.series) {
    write_actigram_csv(act, s, header);
    header = false;
  }
  write_subjects_csv(subj, cohort.dataset.subjects);
  write_truth_csv(truth, cohort);
  write_text(ctx.output("actigrams.csv"), act.str());
  write_text(ctx.output("subjects.csv"), subj.str());
  write_text(ctx.output("truth.csv"), truth.str());
  const auto counts = cohort.dataset.class_counts();
  ctx.out << "synthesized " << cohort.dataset.subjects.size() << " subjects (FA+ "
          << (counts.fa.contains(1) ? counts.fa.at(1) : 0) << ") into " << ctx.cfg.output_dir << '\n';
}

void cmd_ingest(const Context& ctx) {
  const auto series = load_actigrams(ctx);
  std::ostringstream act;
  bool header = true;
  std::int64_t gaps = 0;
  for (const auto& [id, s] : series) {
    validate_series(s);
    gaps += static_cast<std::int64_t>(s.gaps().size());
    write_actigram_csv(act, s, header);
    header = false;
  }
  write_text(ctx.output("actigrams.csv"), act.str());
  if (!ctx.cfg.input.subjects.empty()) {
    auto subjects = load_subjects(ctx);
    const auto ds = assemble_dataset(subjects, series);
    std::ostringstream subj;
    write_subjects_csv(subj, ds.subjects);
    write_text(ctx.output("subjects.csv"), subj.str());
  }
  ctx.out << "ingested " << series.size() << " participants, " << gaps << " gaps\n";
}

void cmd_segment(const Context& ctx, bool svg) {
  const auto series = load_actigrams(ctx);
  const auto segs = segment_all(ctx, series);
  std::ostringstream csv;
  write_segments_csv(csv, segs);
  write_text(ctx.output("segments.csv"), csv.str());
  if (svg) {
    const fs::path dir = ctx.output("svg");
    fs::create_directories(dir);
    for (const auto& s : segs) {
      std::ostringstream doc;
      write_segmentation_svg(doc, s);
      write_text(dir / (s.participant_id + ".svg"), doc.str());
    }
  }
  for (const auto& s : segs) {
    ctx.out << s.participant_id << ": " << s.count(SegmentKind::Activity) << " activity, "
            << s.count(SegmentKind::Rest) << " rest\n";
  }
}

void cmd_features(const Context& ctx) {
  const auto series = load_actigrams(ctx);
  const auto table = extract_table(ctx, segment_all(ctx, series));
  std::ostringstream csv;
  write_feature_csv(csv, table);
  write_text(ctx.output("features.csv"), csv.str());
  write_json(ctx.output("feature_grid.json"), to_json(ctx.cfg.features));
  ctx.out << "extracted " << table.columns.size() << " features for " << table.participant_ids.size()
          << " participants\n";
}

ModelData model_data(const Context& ctx) {
  const auto subjects = load_subjects(ctx);
  const bool need_actimetric = ctx.cfg.group != FeatureGroup::Subjective;
  std::optional<FeatureTable> table;
  if (need_actimetric) table = obtain_features(ctx);
  auto data = build_model_data(table ? &*table : nullptr, subjects, ctx.cfg.model.target);
  require_two_classes(data, ctx.cfg.model.target);
  return data;
}

void cmd_evaluate(const Context& ctx) {
  const auto data = model_data(ctx);
  std::vector<std::size_t> cols;
  if (ctx.cfg.model_features.empty()) {
    cols = candidate_columns(data, ctx.cfg.group);
  } else {
    for (const auto& name : ctx.cfg.model_features) {
      const auto it = std::find(data.columns.begin(), data.columns.end(), name);
      if (it == data.columns.end()) throw ConfigError("unknown model feature '" + name + "'");
      cols.push_back(static_cast<std::size_t>(it - data.columns.begin()));
    }
  }
  if (cols.empty()) throw ConfigError(std::string("no features in group ") + to_string(ctx.cfg.group));
  const auto report = loocv(data.x.select_columns(cols), data.y, ctx.cfg.model);
  std::vector<std::string> names;
  for (auto c : cols) names.push_back(data.columns[c]);

  ordered_json j;
  j["target"] = to_string(ctx.cfg.model.target);
  j["group"] = to_string(ctx.cfg.group);
  j["k_neighbors"] = ctx.cfg.model.k_neighbors;
  j["leakage"] = to_string(ctx.cfg.model.leakage);
  j["n_subjects"] = data.y.size();
  j["features"] = names;
  j["report"] = to_json(report);
  write_json(ctx.output("report_" + run_tag(ctx.cfg) + ".json"), j);
  ctx.out << "MCC " << to_string(ctx.cfg.model.target) << ' ' << to_string(ctx.cfg.group) << ": "
          << fixed4(report.mcc) << " (accuracy " << fixed4(report.accuracy) << ", n=" << data.y.size()
          << ", features=" << names.size() << ")\n";
}

void cmd_select(const Context& ctx) {
  const auto data = model_data(ctx);
  const auto sel = forward_select(data, ctx.cfg.group, ctx.cfg.model);
  ordered_json traj = ordered_json::array();
  for (const auto& s : sel.trajectory) traj.push_back({{"feature", s.feature}, {"mcc", s.mcc}});
  ordered_json j;
  j["target"] = to_string(ctx.cfg.model.target);
  j["group"] = to_string(ctx.cfg.group);
  j["k_neighbors"] = ctx.cfg.model.k_neighbors;
  j["leakage"] = to_string(ctx.cfg.model.leakage);
  j["chosen_features"] = sel.chosen_features;
  j["trajectory"] = traj;
  j["report"] = to_json(sel.final_report);
  write_json(ctx.output("selection_" + run_tag(ctx.cfg) + ".json"), j);
  for (std::size_t i = 0; i < sel.trajectory.size(); ++i) {
    ctx.out << i + 1 << ' ' << sel.trajectory[i].feature << ' ' << fixed4(sel.trajectory[i].mcc) << '\n';
  }
  ctx.out << "MCC " << to_string(ctx.cfg.model.target) << ' ' << to_string(ctx.cfg.group) << ": "
          << fixed4(sel.final_report.mcc) << '\n';
}

void cmd_correlate(const Context& ctx) {
  const auto subjects = load_subjects(ctx);
  const auto table = obtain_features(ctx);
  const auto& rows = ctx.cfg.correlate_features.empty() ? table.columns : ctx.cfg.correlate_features;
  const auto corr = correlation_table(table, subjects, rows);
  std::ostringstream csv;
  write_correlation_csv(csv, corr);
  write_text(ctx.output("correlations.csv"), csv.str());
  std::size_t significant = 0;
  for (const auto& row : corr.cells) {
    for (const auto& c : row) significant += c && c->stars != Stars::None ? 1 : 0;
  }
  ctx.out << "correlated " << corr.features.size() << " features; " << significant
          << " cells with p < 0.05\n";
}

void cmd_metrics(const Context& ctx, const std::string& input) {
  nlohmann::json j;
  if (input.empty() || input == "-") throw ConfigError("metrics needs a confusion-matrix JSON file");
  std::ifstream in(input);
  if (!in) throw FormatError("cannot open '" + input + "'");
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(input + ": " + e.what());
  }
  const auto report = make_report(confusion_from_json(j));
  const auto rj = to_json(report);
  ctx.out << rj.dump(2) << '\n';
  ctx.out << "MCC: " << fixed4(report.mcc) << '\n';
  if (!ctx.cfg.output_dir.empty()) write_json(ctx.output("metrics_report.json"), rj);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const ConfigError*>(&e)) return kExitFormat;
  if (dynamic_cast<const EmptyDataError*>(&e) || dynamic_cast<const InsufficientDataError*>(&e)) {
    return kExitEmpty;
  }
  if (dynamic_cast<const DegenerateLabelsError*>(&e)) return kExitDegenerate;
  return kExitInternal;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Actigraphy segmentation, feature extraction and classification"};
  app.name("actimetry");
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
    sub->add_option("--jobs", opt.jobs, "participants processed in parallel")->check(CLI::PositiveNumber);
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--group", opt.group, "feature group")
        ->check(CLI::IsMember({"activity", "rest", "both", "subjective", "all"}));
    sub->add_option("--target", opt.target, "classification target")->check(CLI::IsMember({"fa", "sc"}));
  };

  auto* synth = app.add_subcommand("synth", "generate a synthetic cohort");
  add_common(synth);
  synth->add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) {
        opt.seed = s;
        opt.seed_set = true;
      }, "random seed (overrides config)");
  auto* ingest = app.add_subcommand("ingest", "validate and normalize actigrams and subjects");
  add_common(ingest);
  auto* segment = app.add_subcommand("segment", "segment actigrams into activity and rest");
  add_common(segment);
  segment->add_flag("--svg", opt.svg, "also write one SVG plot per participant");
  auto* features = app.add_subcommand("features", "extract the 256 actimetric features");
  add_common(features);
  auto* evaluate = app.add_subcommand("evaluate", "LOOCV KNN evaluation of a feature set");
  add_common(evaluate);
  add_model(evaluate);
  auto* select = app.add_subcommand("select", "greedy forward feature selection");
  add_common(select);
  add_model(select);
  auto* correlate = app.add_subcommand("correlate", "Pearson correlations with questionnaire scores");
  add_common(correlate);
  auto* metrics = app.add_subcommand("metrics", "report from a confusion-matrix JSON file");
  metrics->add_option("input", opt.input, "JSON with labels and counts [actual][predicted]")->required();
  metrics->add_option("--out", opt.out_dir, "also write metrics_report.json here");
  auto* config = app.add_subcommand("config", "configuration utilities");
  config->require_subcommand(1);
  auto* config_init = config->add_subcommand("init", "print the default configuration");
  config_init->add_option("--out", opt.out_dir, "write config.json into this directory instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  }

  try {
    RunConfig cfg = opt.config_path.empty() ? config_from_json(nlohmann::json::object())
                                            : load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
    if (opt.jobs > 0) cfg.jobs = opt.jobs;
    if (opt.seed_set) cfg.synth.seed = opt.seed;
    if (!opt.group.empty()) cfg.group = feature_group_from_string(opt.group);
    if (!opt.target.empty()) cfg.model.target = target_from_string(opt.target);

    if (*config_init) {
      const auto text = to_json(RunConfig{}, true).dump(2) + "\n";
      if (opt.out_dir.empty()) {
        out << text;
      } else {
        fs::create_directories(opt.out_dir);
        write_text(fs::path(opt.out_dir) / "config.json", text);
      }
      return kExitOk;
    }
    if (*metrics && opt.out_dir.empty()) cfg.output_dir.clear();

    Context ctx(std::move(cfg), out, err);
    if (*synth) cmd_synth(ctx);
    if (*ingest) cmd_ingest(ctx);
    if (*segment) cmd_segment(ctx, opt.svg);
    if (*features) cmd_features(ctx);
    if (*evaluate) cmd_evaluate(ctx);
    if (*select) cmd_select(ctx);
    if (*correlate) cmd_correlate(ctx);
    if (*metrics) cmd_metrics(ctx, opt.input);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace actimetry::cli
