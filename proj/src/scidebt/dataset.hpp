#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "scidebt/normalize.hpp"
#include "scidebt/types.hpp"

namespace scidebt {

struct LabeledInstance {
  NormalizedInstance instance;
  SatdClass label = SatdClass::non_debt;
  std::optional<Indicator> indicator;  // only with scientific_debt
  std::string annotator;
  std::uint32_t round = 0;  // 0 = seed data
  Origin origin = Origin::cass_manual;

  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

json to_json(const LabeledInstance& li);
LabeledInstance labeled_instance_from_json(const json& j);

struct Dataset {
  std::vector<LabeledInstance> instances;
  std::string created_at;
  std::vector<std::string> lineage;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
  const LabeledInstance* find(std::string_view instance_id) const;
};

// Unique ids and alphabet-clean texts; throws Error(conflict/parse) otherwise.
void validate(const Dataset& ds);

// Union of all inputs. Identical (id, label) pairs collapse to one copy;
// the same id with different labels raises Error(conflict) listing the ids.
Dataset merge(std::span<const Dataset> datasets);

// Counts per (class x kind), the layout of the labeled distribution table.
struct DistributionTable {
  std::array<std::array<std::size_t, kArtifactKindCount>, kClassCount> counts{};

  std::size_t row_total(SatdClass c) const;
  std::size_t column_total(ArtifactKind k) const;
  std::size_t total() const;
};

DistributionTable distribution(const Dataset& ds);
std::string render_distribution_csv(const DistributionTable& table);
json to_json(const DistributionTable& table);

// Folds partition the dataset; within each (kind, label) cell fold sizes
// differ by at most one.
struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;  // aligned with Dataset::instances
  std::unordered_map<std::string, std::size_t> assignment;

  std::vector<std::size_t> members(std::size_t fold) const;
};

FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed);

// Subsets of a dataset by index list, preserving the lineage.
Dataset subset(const Dataset& ds, std::span<const std::size_t> indices);

// z^2 p (1-p) / margin^2 before rounding; confidence in {0.90, 0.95, 0.99}.
double sample_size_raw(double confidence, double margin, double p = 0.5);
// Round-half-up of sample_size_raw.
std::size_t sample_size(double confidence, double margin, double p = 0.5);

std::string utc_now_iso8601();

// ---------------------------------------------------------------------------
// Persistence: append-only JSONL plus a side manifest at <path>.manifest.json
// holding counts, lineage and the content hash.
// ---------------------------------------------------------------------------

std::filesystem::path manifest_path(const std::filesystem::path& dataset_path);

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

// Hex FNV-1a of the dataset file bytes; identifies an immutable snapshot.
std::string dataset_file_hash(const std::filesystem::path& path);

// Serialized delta lines, shared by every append path so that equal inputs
// yield byte-identical files.
std::string serialize_delta(std::span<const LabeledInstance> delta);

// Single writer over one dataset file.
class DatasetWriter {
 public:
  explicit DatasetWriter(std::filesystem::path path);

  const Dataset& snapshot() const { return dataset_; }
  // Appends the delta; throws Error(conflict) if an id is already present.
  void append(std::span<const LabeledInstance> delta, const std::string& lineage_tag = {});
  std::string hash() const { return dataset_file_hash(path_); }

 private:
  void write_manifest() const;

  std::filesystem::path path_;
  Dataset dataset_;
};

}  // namespace scidebt
