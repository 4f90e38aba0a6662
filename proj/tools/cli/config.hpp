#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include <actimetry/features.hpp>
#include <actimetry/ingest.hpp>
#include <actimetry/model.hpp>
#include <actimetry/segmentation.hpp>
#include <actimetry/synth.hpp>

namespace actimetry::cli {

enum class LogLevel { Quiet, Info, Debug };

struct InputPaths {
  /// Actigram CSV file, or a directory whose *.csv files are read in name order.
  std::string actigrams;
  InputFormat format = InputFormat::MinuteCsv;
  std::string subjects;
  /// Precomputed feature CSV; when empty, features are extracted from actigrams.
  std::string features;
};

struct RunConfig {
  InputPaths input;
  std::string output_dir = "out";
  LogLevel log_level = LogLevel::Info;
  unsigned jobs = 1;
  SegmentationConfig segmentation;
  FeatureGrid features = FeatureGrid::defaults();
  ModelConfig model;
  FeatureGroup group = FeatureGroup::Both;
  /// Fixed feature subset for evaluate; empty means every column of the group.
  std::vector<std::string> model_features;
  /// Rows of the correlation table; empty means every actimetric column.
  std::vector<std::string> correlate_features;
  SynthConfig synth;

  void validate() const;
};

nlohmann::ordered_json to_json(const RunConfig& cfg, bool with_docs = false);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const FeatureGrid& grid);
nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_json(const nlohmann::json& j);

}  // namespace actimetry::cli
