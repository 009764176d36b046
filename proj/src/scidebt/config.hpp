#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scidebt/active_loop.hpp"
#include "scidebt/heuristics.hpp"
#include "scidebt/ingest.hpp"

namespace scidebt {

struct PathsConfig {
  std::filesystem::path dataset;      // labeled JSONL
  std::filesystem::path seed_dataset; // copied into `dataset` when that file is absent
  std::filesystem::path unlabeled;    // normalized JSONL
  std::filesystem::path loop_state;
  std::filesystem::path rounds_log;   // JSONL, one record per closed round
  std::filesystem::path predictions;  // JSONL
  std::filesystem::path prevalence;   // JSON report
  std::filesystem::path survey;       // JSONL of responses
  std::filesystem::path calibration;  // JSON calibration input
};

struct Config {
  std::vector<std::string> bots;
  SelectionCriteria criteria;
  SyntaxRegistry syntax = SyntaxRegistry::defaults();
  std::vector<std::string> license_keywords;
  std::size_t inspection_sample = 100;
  KeywordConfig keywords = KeywordConfig::defaults();
  TrainOptions model;
  std::size_t folds = 3;
  LoopConfig loop;
  PathsConfig paths;
  std::string host = "127.0.0.1";
  int port = 8080;

  json source;  // merged document the fields were read from
};

json default_config_json();

// Parses a merged config document; relative paths resolve against `base_dir`.
Config config_from_json(const json& j, const std::filesystem::path& base_dir = {});

// Variables named SCIDEBT_<SECTION>__<KEY> set config[section][key]; values
// parse as JSON when they can, otherwise they are taken as strings.
void apply_env_overrides(json& j, const std::map<std::string, std::string>& env);
std::map<std::string, std::string> process_environment();

// Writer over paths.dataset, initialized from paths.seed_dataset on first use.
DatasetWriter open_dataset_writer(const Config& cfg);

// Defaults, then the file (when given), then the environment.
Config load_config(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& env = process_environment());

}  // namespace scidebt
