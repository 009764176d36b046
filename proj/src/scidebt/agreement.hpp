#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scidebt/util.hpp"

namespace scidebt {

struct AgreementReport {
  std::size_t n = 0;
  std::size_t agreements = 0;
  double p_o = 0.0;
  double p_e = 0.0;
  double kappa = 0.0;
  std::vector<std::string> labels;                 // sorted label set
  std::vector<std::vector<std::size_t>> confusion;  // [a label][b label]
  // p_e == 1: kappa is undefined and reported as 1 (p_o == 1) or 0.
  bool degenerate = false;

  friend bool operator==(const AgreementReport&, const AgreementReport&) = default;
};

// Cohen's kappa for two annotators: (p_o - p_e) / (1 - p_e), with p_e the sum
// over labels of the product of both marginals. Throws on empty input or a
// length mismatch.
AgreementReport cohens_kappa(std::span<const std::string> labels_a,
                             std::span<const std::string> labels_b);

// Conventional Landis-Koch wording; display only.
std::string_view agreement_band(double kappa);

struct CalibrationSource {
  std::string name;
  std::vector<std::string> labels_a;
  std::vector<std::string> labels_b;
};

struct CalibrationRow {
  std::string source;
  AgreementReport report;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  CalibrationRow combined;  // over the concatenated vectors
};

CalibrationReport calibration_report(std::span<const CalibrationSource> sources);

// Columns: Data Source, Agreement (x/n), Cohen's Kappa (3 decimals).
std::string render_calibration_csv(const CalibrationReport& report);
json to_json(const CalibrationReport& report);
json to_json(const AgreementReport& report);

// Input: a list of {"source", "a", "b"} objects (list order), or an object
// {"<source>": {"a": [...], "b": [...]}} (sources in key order).
std::vector<CalibrationSource> calibration_sources_from_json(const json& j);

enum class Judgment { agree, unsure, disagree };

struct SurveyResponse {
  std::string snippet_id;
  Judgment judgment = Judgment::agree;
  int usefulness = 3;  // Likert 1..5
  std::string respondent;
};

SurveyResponse survey_response_from_json(const json& j);
json to_json(const SurveyResponse& r);

struct SurveyAggregate {
  std::size_t responses = 0;
  double agree_pct = 0.0;
  double unsure_pct = 0.0;
  double disagree_pct = 0.0;
  double mean_usefulness = 0.0;
};

SurveyAggregate survey_aggregate(std::span<const SurveyResponse> responses);
json to_json(const SurveyAggregate& agg);

}  // namespace scidebt
