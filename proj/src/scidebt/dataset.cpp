#include "scidebt/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "scidebt/error.hpp"

namespace scidebt {

json to_json(const LabeledInstance& li) {
  json j{{"instance_id", li.instance.instance_id},
         {"kind", to_string(li.instance.kind)},
         {"text", li.instance.text},
         {"label", to_string(li.label)}};
  if (li.indicator) j["indicator"] = to_string(*li.indicator);
  j["annotator"] = li.annotator;
  j["round"] = li.round;
  j["origin"] = to_string(li.origin);
  return j;
}

LabeledInstance labeled_instance_from_json(const json& j) {
  constexpr std::string_view ctx = "labeled instance";
  LabeledInstance li;
  const std::string id = require_string(j, "instance_id", ctx);
  const std::string text = require_string(j, "text", ctx);
  if (text.empty() || !in_normalized_alphabet(text)) {
    fail(ErrorCode::parse, "labeled instance '" + id + "': text violates the normalized alphabet");
  }
  li.instance = make_instance(id, parse_kind(require_string(j, "kind", ctx)), text);
  li.label = parse_class(require_string(j, "label", ctx));
  if (auto ind = optional_string(j, "indicator", ctx); !ind.empty()) {
    if (li.label != SatdClass::scientific_debt) {
      fail(ErrorCode::parse, "labeled instance '" + id +
                                 "': indicator is only allowed with scientific_debt");
    }
    li.indicator = parse_indicator(ind);
  }
  li.annotator = optional_string(j, "annotator", ctx);
  const std::int64_t round = j.contains("round") ? require_int(j, "round", ctx) : 0;
  if (round < 0) fail(ErrorCode::parse, "labeled instance '" + id + "': negative round");
  li.round = static_cast<std::uint32_t>(round);
  li.origin = parse_origin(require_string(j, "origin", ctx));
  return li;
}

const LabeledInstance* Dataset::find(std::string_view instance_id) const {
  for (const auto& li : instances) {
    if (li.instance.instance_id == instance_id) return &li;
  }
  return nullptr;
}

void validate(const Dataset& ds) {
  std::unordered_set<std::string_view> ids;
  for (const auto& li : ds.instances) {
    if (!ids.insert(li.instance.instance_id).second) {
      fail(ErrorCode::conflict, "duplicate instance_id '" + li.instance.instance_id + "'");
    }
    if (li.instance.text.empty() || !in_normalized_alphabet(li.instance.text)) {
      fail(ErrorCode::parse, "instance '" + li.instance.instance_id +
                                 "' violates the normalized alphabet");
    }
  }
}

Dataset merge(std::span<const Dataset> datasets) {
  Dataset out;
  out.created_at = utc_now_iso8601();
  std::unordered_map<std::string, std::size_t> position;
  std::vector<std::string> conflicts;
  for (const auto& ds : datasets) {
    out.lineage.insert(out.lineage.end(), ds.lineage.begin(), ds.lineage.end());
    for (const auto& li : ds.instances) {
      auto [it, inserted] = position.emplace(li.instance.instance_id, out.instances.size());
      if (inserted) {
        out.instances.push_back(li);
      } else if (out.instances[it->second].label != li.label) {
        conflicts.push_back(li.instance.instance_id);
      }
    }
  }
  if (!conflicts.empty()) {
    std::string ids;
    for (const auto& c : conflicts) ids += (ids.empty() ? "" : ", ") + c;
    fail(ErrorCode::conflict, "label conflict for instance ids: " + ids);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distribution
// ---------------------------------------------------------------------------

std::size_t DistributionTable::row_total(SatdClass c) const {
  std::size_t n = 0;
  for (auto v : counts[index_of(c)]) n += v;
  return n;
}

std::size_t DistributionTable::column_total(ArtifactKind k) const {
  std::size_t n = 0;
  for (const auto& row : counts) n += row[index_of(k)];
  return n;
}

std::size_t DistributionTable::total() const {
  std::size_t n = 0;
  for (auto c : kAllClasses) n += row_total(c);
  return n;
}

DistributionTable distribution(const Dataset& ds) {
  DistributionTable t;
  for (const auto& li : ds.instances) ++t.counts[index_of(li.label)][index_of(li.instance.kind)];
  return t;
}

std::string render_distribution_csv(const DistributionTable& t) {
  std::ostringstream out;
  out << "SATD Class";
  for (auto k : kAllKinds) out << ',' << short_code(k);
  out << ",Total\n";
  for (auto c : kAllClasses) {
    out << display_name(c);
    for (auto k : kAllKinds) out << ',' << t.counts[index_of(c)][index_of(k)];
    out << ',' << t.row_total(c) << '\n';
  }
  out << "Total";
  for (auto k : kAllKinds) out << ',' << t.column_total(k);
  out << ',' << t.total() << '\n';
  return out.str();
}

json to_json(const DistributionTable& t) {
  json rows = json::array();
  for (auto c : kAllClasses) {
    json row{{"class", to_string(c)}};
    for (auto k : kAllKinds) row[std::string(to_string(k))] = t.counts[index_of(c)][index_of(k)];
    row["total"] = t.row_total(c);
    rows.push_back(row);
  }
  json totals;
  for (auto k : kAllKinds) totals[std::string(to_string(k))] = t.column_total(k);
  totals["total"] = t.total();
  return json{{"rows", rows}, {"totals", totals}};
}

// ---------------------------------------------------------------------------
// Folds
// ---------------------------------------------------------------------------

std::vector<std::size_t> FoldPlan::members(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) fail(ErrorCode::invalid_argument, "stratified folds need k >= 2");
  if (k > ds.size()) {
    fail(ErrorCode::invalid_argument, "k = " + std::to_string(k) +
                                          " exceeds the dataset size " + std::to_string(ds.size()));
  }
  // Cells in (kind, label) enumeration order; members in dataset order.
  std::array<std::array<std::vector<std::size_t>, kClassCount>, kArtifactKindCount> cells;
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    const auto& li = ds.instances[i];
    cells[index_of(li.instance.kind)][index_of(li.label)].push_back(i);
  }

  FoldPlan plan;
  plan.k = k;
  plan.fold_of.assign(ds.size(), 0);
  Rng rng(seed);
  // Round-robin within each cell gives the <= 1 imbalance; the running offset
  // spreads remainders so overall fold sizes stay balanced too.
  std::size_t offset = 0;
  for (auto& by_label : cells) {
    for (auto& cell : by_label) {
      rng.shuffle(cell);
      for (std::size_t j = 0; j < cell.size(); ++j) plan.fold_of[cell[j]] = (offset + j) % k;
      offset = (offset + cell.size()) % k;
    }
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    plan.assignment.emplace(ds.instances[i].instance.instance_id, plan.fold_of[i]);
  }
  return plan;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices) {
  Dataset out;
  out.created_at = ds.created_at;
  out.lineage = ds.lineage;
  out.instances.reserve(indices.size());
  for (auto i : indices) out.instances.push_back(ds.instances.at(i));
  return out;
}

// ---------------------------------------------------------------------------
// Sample size
// ---------------------------------------------------------------------------

double sample_size_raw(double confidence, double margin, double p) {
  if (!(margin > 0.0) || !(margin < 1.0)) {
    fail(ErrorCode::invalid_argument, "margin must lie in (0, 1)");
  }
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::invalid_argument, "p must lie in [0, 1]");
  double z = 0.0;
  if (std::abs(confidence - 0.90) < 1e-9) z = 1.645;
  else if (std::abs(confidence - 0.95) < 1e-9) z = 1.960;
  else if (std::abs(confidence - 0.99) < 1e-9) z = 2.576;
  else fail(ErrorCode::invalid_argument, "confidence must be one of 0.90, 0.95, 0.99");
  return z * z * p * (1.0 - p) / (margin * margin);
}

std::size_t sample_size(double confidence, double margin, double p) {
  return static_cast<std::size_t>(std::floor(sample_size_raw(confidence, margin, p) + 0.5));
}

std::string utc_now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

std::filesystem::path manifest_path(const std::filesystem::path& dataset_path) {
  return std::filesystem::path(dataset_path.string() + ".manifest.json");
}

namespace {

json manifest_json(const Dataset& ds, const std::string& hash) {
  json classes;
  const auto table = distribution(ds);
  for (auto c : kAllClasses) classes[std::string(to_string(c))] = table.row_total(c);
  return json{{"count", ds.size()},
              {"created_at", ds.created_at},
              {"lineage", ds.lineage},
              {"hash", hash},
              {"class_counts", classes}};
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  Dataset ds;
  for (const auto& row : read_jsonl(path)) ds.instances.push_back(labeled_instance_from_json(row));
  const auto mpath = manifest_path(path);
  if (std::filesystem::exists(mpath)) {
    const json m = parse_json(read_file(mpath), mpath.string());
    ds.created_at = m.value("created_at", "");
    if (m.contains("lineage")) ds.lineage = m["lineage"].get<std::vector<std::string>>();
  } else {
    ds.lineage = {path.stem().string()};
  }
  validate(ds);
  return ds;
}

std::string serialize_delta(std::span<const LabeledInstance> delta) {
  std::string out;
  for (const auto& li : delta) {
    out += to_json(li).dump();
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  validate(ds);
  write_file(path, serialize_delta(ds.instances));
  write_file(manifest_path(path), manifest_json(ds, dataset_file_hash(path)).dump(2) + "\n");
}

std::string dataset_file_hash(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return to_hex(fnv1a64(""));
  return to_hex(fnv1a64(read_file(path)));
}

DatasetWriter::DatasetWriter(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    dataset_ = load_dataset(path_);
  } else {
    dataset_.created_at = utc_now_iso8601();
    dataset_.lineage = {path_.stem().string()};
    write_file(path_, "");
    write_manifest();
  }
}

void DatasetWriter::append(std::span<const LabeledInstance> delta, const std::string& lineage_tag) {
  std::unordered_set<std::string_view> fresh;
  for (const auto& li : delta) {
    if (dataset_.find(li.instance.instance_id) != nullptr ||
        !fresh.insert(li.instance.instance_id).second) {
      fail(ErrorCode::conflict, "instance '" + li.instance.instance_id + "' is already labeled");
    }
    if (li.instance.text.empty() || !in_normalized_alphabet(li.instance.text)) {
      fail(ErrorCode::parse, "instance '" + li.instance.instance_id +
                                 "' violates the normalized alphabet");
    }
  }
  const std::string lines = serialize_delta(delta);
  {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) fail(ErrorCode::io, "cannot append to '" + path_.string() + "'");
    out << lines;
  }
  dataset_.instances.insert(dataset_.instances.end(), delta.begin(), delta.end());
  if (!lineage_tag.empty() &&
      std::find(dataset_.lineage.begin(), dataset_.lineage.end(), lineage_tag) == dataset_.lineage.end()) {
    dataset_.lineage.push_back(lineage_tag);
  }
  write_manifest();
}

void DatasetWriter::write_manifest() const {
  write_file(manifest_path(path_), manifest_json(dataset_, dataset_file_hash(path_)).dump(2) + "\n");
}

}  // namespace scidebt
