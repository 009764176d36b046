#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "scidebt/classifier.hpp"
#include "scidebt/dataset.hpp"

namespace scidebt {

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

struct HighConfidenceScientific {
  double tau_hi = 0.9;
};

struct LowConfidenceBorderline {
  double tau_lo = 0.6;
  double margin_max = 0.1;
};

struct StratifiedMisc {
  std::array<std::size_t, kClassCount> quota{17, 17, 17, 17, 17, 17};
};

using SelectionStrategy = std::variant<HighConfidenceScientific, LowConfidenceBorderline, StratifiedMisc>;

std::string_view strategy_name(const SelectionStrategy& s);
// 0 < tau_lo <= tau_hi < 1 and margin_max in (0, 1); Error(invalid_argument).
void validate(const SelectionStrategy& s);
json to_json(const SelectionStrategy& s);
SelectionStrategy strategy_from_json(const json& j);

struct BatchItem {
  NormalizedInstance instance;
  Prediction prediction;
};

struct SelectionBatch {
  std::string batch_id;
  std::uint32_t round = 0;
  SelectionStrategy strategy;
  std::size_t budget = 0;
  std::vector<BatchItem> items;
  // Annotation progress while the round is open.
  std::vector<std::string> labeled;
  std::vector<std::string> skipped;

  const BatchItem* find(std::string_view instance_id) const;
  bool is_resolved(std::string_view instance_id) const;
};

json to_json(const SelectionBatch& b);
SelectionBatch selection_batch_from_json(const json& j);

// high_confidence_scientific: predicted scientific_debt with confidence >= tau_hi,
//   most confident first.
// low_confidence_borderline: confidence <= tau_lo or margin <= margin_max,
//   least confident first.
// stratified_misc: round-robin over predicted classes up to each quota.
// Ties keep candidate order; the result never exceeds `budget`.
SelectionBatch select_batch(std::span<const BatchItem> candidates, const SelectionStrategy& strategy,
                            std::size_t budget, std::string batch_id = {}, std::uint32_t round = 0);

// ---------------------------------------------------------------------------
// Annotation
// ---------------------------------------------------------------------------

struct LabelSubmission {
  std::string instance_id;
  std::optional<SatdClass> label;  // absent when skip is set
  std::optional<Indicator> indicator;
  std::string annotator;
  bool skip = false;
};

LabelSubmission label_submission_from_json(const json& j);

struct AnnotationResult {
  std::vector<LabeledInstance> delta;
  std::vector<std::string> skipped;
};

// Validates a submission against its batch and turns labels into a delta
// (origin pseudo_label_verified, round = batch round). Ids outside the batch
// and duplicate ids raise Error(invalid_argument); ids already resolved in
// the batch raise Error(conflict). With `close_batch`, unlabeled items are
// reported as skipped.
AnnotationResult record_annotations(const SelectionBatch& batch,
                                    std::span<const LabelSubmission> labels,
                                    bool close_batch = true);

// ---------------------------------------------------------------------------
// Rounds
// ---------------------------------------------------------------------------

struct StrategyPlan {
  SelectionStrategy strategy;
  std::size_t budget = 0;
};

struct LoopConfig {
  double alpha = 1.0;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  std::vector<StrategyPlan> plans = {
      {HighConfidenceScientific{}, 50}, {LowConfidenceBorderline{}, 50}, {StratifiedMisc{}, 100}};
};

struct RoundRecord {
  std::uint32_t round = 0;
  std::string model_hash;
  std::string dataset_ref;
  std::vector<std::string> batch_ids;
  std::size_t selected = 0;
  std::size_t labeled = 0;
  std::size_t skipped = 0;
  std::size_t dataset_size_before = 0;
  std::size_t dataset_size_after = 0;
};

json to_json(const RoundRecord& r);
RoundRecord round_record_from_json(const json& j);

struct LoopState {
  std::uint32_t round = 1;  // round 0 is the seed data
  double alpha = 1.0;
  double lambda = 0.5;
  std::string dataset_ref;  // dataset file hash the open round was built on
  std::string model_hash;
  std::size_t dataset_size_at_open = 0;
  std::vector<SelectionBatch> pending_batches;
  std::vector<RoundRecord> history;

  bool round_open() const { return !pending_batches.empty() || !model_hash.empty(); }
  SelectionBatch* find_batch(std::string_view batch_id);
};

json to_json(const LoopState& s);
LoopState loop_state_from_json(const json& j);
LoopState load_loop_state(const std::filesystem::path& path);  // fresh state when absent
void save_loop_state(const LoopState& s, const std::filesystem::path& path);

struct RoundOutput {
  NaiveBayesModel model;
  std::vector<SelectionBatch> batches;
};

// Trains a fresh model from the base configuration on `dataset` (never from
// the previous round's parameters), scores every unlabeled instance not yet
// in the dataset, and opens the round with disjoint batches. Throws
// Error(conflict) while another round is open.
RoundOutput run_round(LoopState& state, const Dataset& dataset,
                      std::span<const NormalizedInstance> unlabeled, const LoopConfig& config,
                      const std::string& dataset_ref = {});

// Applies one submission to an open batch: the only write path for labels.
AnnotationResult submit_labels(LoopState& state, DatasetWriter& writer, std::string_view batch_id,
                               std::span<const LabelSubmission> labels, bool close_batch = false);

// Marks unresolved items skipped, records the round and advances it. A round
// without annotations still closes.
RoundRecord close_round(LoopState& state, const DatasetWriter& writer);

}  // namespace scidebt
