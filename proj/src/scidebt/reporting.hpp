#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scidebt/classifier.hpp"
#include "scidebt/normalize.hpp"

namespace scidebt {

struct PrevalenceReport {
  std::array<std::array<std::size_t, kClassCount>, kArtifactKindCount> counts{};  // [kind][class]

  std::size_t kind_total(ArtifactKind k) const;
  std::size_t total() const;
  // Unrounded share of the class within its kind, in percent; 0 for an empty kind.
  double percentage(ArtifactKind k, SatdClass c) const;
  // Round-half-up to hundredths of a percent, computed on integers.
  std::uint64_t percentage_hundredths(ArtifactKind k, SatdClass c) const;

  void add(ArtifactKind k, SatdClass c) { ++counts[index_of(k)][index_of(c)]; }
  friend bool operator==(const PrevalenceReport&, const PrevalenceReport&) = default;
};

// Column order of the rendered prevalence table.
inline constexpr std::array<SatdClass, kClassCount> kPrevalenceColumns = {
    SatdClass::code_design_debt, SatdClass::documentation_debt, SatdClass::requirement_debt,
    SatdClass::test_debt,        SatdClass::scientific_debt,    SatdClass::non_debt};

// Cells read "5,660 (1.30%)".
std::string render_prevalence_csv(const PrevalenceReport& report);
json to_json(const PrevalenceReport& report);
PrevalenceReport prevalence_from_json(const json& j);

std::string format_count(std::size_t n);  // thousands separators

// One line of the predictions stream.
struct PredictionRecord {
  ArtifactKind kind = ArtifactKind::code_comment;
  Prediction prediction;
};

json to_json(const PredictionRecord& r);
PredictionRecord prediction_record_from_json(const json& j);

struct ClassifyOptions {
  std::size_t chunk_size = 4096;  // instances predicted per parallel chunk
  std::size_t workers = 0;        // 0 = hardware concurrency
  std::size_t checkpoint_every = 100000;
  std::function<void(std::size_t processed, const PrevalenceReport&)> on_checkpoint;
};

// Classifies in input order; `sink` sees each record exactly once, in order.
PrevalenceReport classify_corpus(const Scorer& model, std::span<const NormalizedInstance> instances,
                                 const std::function<void(const PredictionRecord&)>& sink,
                                 const ClassifyOptions& options = {});

// Streams normalized JSONL to predictions JSONL with bounded memory.
PrevalenceReport classify_corpus_file(const Scorer& model, const std::filesystem::path& in,
                                      const std::filesystem::path& out,
                                      const ClassifyOptions& options = {});

// Independent tally of a predictions stream.
PrevalenceReport recount_predictions(const std::filesystem::path& predictions);

}  // namespace scidebt
