#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scidebt/classifier.hpp"
#include "scidebt/dataset.hpp"

namespace scidebt {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // true instances of the class
};

using ConfusionMatrix = std::array<std::array<std::size_t, kClassCount>, kClassCount>;  // [true][pred]

struct MetricsReport {
  std::array<ClassMetrics, kClassCount> per_class{};
  // Classes occurring in the truth or the predictions; macro-F1 averages them.
  std::array<bool, kClassCount> present{};
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  ConfusionMatrix confusion{};
  std::size_t total = 0;
};

// All metrics derive from the confusion matrix; zero denominators yield 0.
MetricsReport metrics_from_confusion(const ConfusionMatrix& confusion);
MetricsReport evaluate_labels(std::span<const SatdClass> truth, std::span<const SatdClass> predicted);
// Throws Error(invalid_argument) on an empty test set.
MetricsReport evaluate(const Scorer& model, const Dataset& test);

struct MetricSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CrossValidationReport {
  std::vector<MetricsReport> folds;
  MetricSummary accuracy;
  MetricSummary macro_f1;
  // Averaged over the folds in which the class is present.
  std::array<MetricSummary, kClassCount> precision{};
  std::array<MetricSummary, kClassCount> recall{};
  std::array<MetricSummary, kClassCount> f1{};
};

CrossValidationReport cross_validate(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                                     const TrainOptions& options);

struct GridRow {
  double alpha = 0.0;
  double lambda = 0.0;
  double mean_macro_f1 = 0.0;
  double mean_accuracy = 0.0;
};

struct GridSearchResult {
  std::vector<GridRow> table;  // alpha-major, grid order
  GridRow best;
};

inline const std::vector<double> kDefaultAlphaGrid = {0.1, 0.5, 1.0};
inline const std::vector<double> kDefaultLambdaGrid = {0.0, 0.5, 1.0};

// Best by mean macro-F1; ties go to the smaller alpha, then the larger lambda.
GridSearchResult grid_search(const Dataset& dataset, std::span<const double> alpha_grid,
                             std::span<const double> lambda_grid, std::size_t k,
                             std::uint64_t seed, bool single_head = false);

struct ExclusionReport {
  std::array<std::size_t, kClassCount> counts{};  // per predicted class
  std::size_t total = 0;
  std::vector<Prediction> predictions;
};

// Trains without scientific_debt, then classifies every scientific_debt
// instance with that model.
ExclusionReport exclusion_experiment(const Dataset& dataset, double alpha = 1.0, double lambda = 0.5);

struct HeadComparison {
  CrossValidationReport multi_head;
  CrossValidationReport single_head;
};

HeadComparison compare_heads(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                             double alpha, double lambda);

std::string render_metrics_csv(const MetricsReport& report);
json to_json(const MetricsReport& report);
std::string render_cross_validation_csv(const CrossValidationReport& report);
json to_json(const CrossValidationReport& report);
std::string render_grid_csv(const GridSearchResult& result);
json to_json(const GridSearchResult& result);
// Rows sorted by count, descending; ties in class order; then a Total row.
std::string render_exclusion_csv(const ExclusionReport& report);
json to_json(const ExclusionReport& report);

// Lowercase label vocabulary of the exclusion table ("code/design debt").
std::string_view exclusion_label(SatdClass c);

}  // namespace scidebt
