#include "scidebt/active_loop.hpp"

#include <algorithm>
#include <unordered_set>

#include "scidebt/error.hpp"

namespace scidebt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool contains(const std::vector<std::string>& v, std::string_view id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

}  // namespace

std::string_view strategy_name(const SelectionStrategy& s) {
  return std::visit(overloaded{
                        [](const HighConfidenceScientific&) -> std::string_view {
                          return "high_confidence_scientific";
                        },
                        [](const LowConfidenceBorderline&) -> std::string_view {
                          return "low_confidence_borderline";
                        },
                        [](const StratifiedMisc&) -> std::string_view { return "stratified_misc"; },
                    },
                    s);
}

void validate(const SelectionStrategy& s) {
  std::visit(overloaded{
                 [](const HighConfidenceScientific& h) {
                   if (!(h.tau_hi > 0.0 && h.tau_hi < 1.0)) {
                     fail(ErrorCode::invalid_argument, "tau_hi must lie in (0, 1)");
                   }
                 },
                 [](const LowConfidenceBorderline& l) {
                   if (!(l.tau_lo > 0.0 && l.tau_lo < 1.0)) {
                     fail(ErrorCode::invalid_argument, "tau_lo must lie in (0, 1)");
                   }
                   if (!(l.margin_max > 0.0 && l.margin_max < 1.0)) {
                     fail(ErrorCode::invalid_argument, "margin_max must lie in (0, 1)");
                   }
                 },
                 [](const StratifiedMisc&) {},
             },
             s);
}

json to_json(const SelectionStrategy& s) {
  json j{{"name", strategy_name(s)}};
  std::visit(overloaded{
                 [&](const HighConfidenceScientific& h) { j["tau_hi"] = h.tau_hi; },
                 [&](const LowConfidenceBorderline& l) {
                   j["tau_lo"] = l.tau_lo;
                   j["margin_max"] = l.margin_max;
                 },
                 [&](const StratifiedMisc& m) {
                   json q = json::object();
                   for (auto c : kAllClasses) q[std::string(to_string(c))] = m.quota[index_of(c)];
                   j["quota"] = q;
                 },
             },
             s);
  return j;
}

SelectionStrategy strategy_from_json(const json& j) {
  constexpr std::string_view ctx = "selection strategy";
  const std::string name = require_string(j, "name", ctx);
  SelectionStrategy out;
  if (name == "high_confidence_scientific") {
    HighConfidenceScientific h;
    if (j.contains("tau_hi")) h.tau_hi = j.at("tau_hi").get<double>();
    out = h;
  } else if (name == "low_confidence_borderline") {
    LowConfidenceBorderline l;
    if (j.contains("tau_lo")) l.tau_lo = j.at("tau_lo").get<double>();
    if (j.contains("margin_max")) l.margin_max = j.at("margin_max").get<double>();
    out = l;
  } else if (name == "stratified_misc") {
    StratifiedMisc m;
    if (j.contains("quota")) {
      const json& q = j.at("quota");
      if (q.is_number_unsigned()) {
        m.quota.fill(q.get<std::size_t>());
      } else if (q.is_object()) {
        for (const auto& [key, v] : q.items()) m.quota[index_of(parse_class(key))] = v.get<std::size_t>();
      } else {
        fail(ErrorCode::parse, "selection strategy: quota must be a count or an object");
      }
    }
    out = m;
  } else {
    fail(ErrorCode::parse, "selection strategy: unknown name '" + name + "'");
  }
  validate(out);
  return out;
}

const BatchItem* SelectionBatch::find(std::string_view instance_id) const {
  for (const auto& item : items) {
    if (item.instance.instance_id == instance_id) return &item;
  }
  return nullptr;
}

bool SelectionBatch::is_resolved(std::string_view instance_id) const {
  return contains(labeled, instance_id) || contains(skipped, instance_id);
}

json to_json(const SelectionBatch& b) {
  json items = json::array();
  for (const auto& item : b.items) {
    items.push_back(json{{"instance", to_json(item.instance)}, {"prediction", to_json(item.prediction)}});
  }
  return json{{"batch_id", b.batch_id}, {"round", b.round},     {"strategy", to_json(b.strategy)},
              {"budget", b.budget},     {"items", items},       {"labeled", b.labeled},
              {"skipped", b.skipped}};
}

SelectionBatch selection_batch_from_json(const json& j) {
  constexpr std::string_view ctx = "selection batch";
  SelectionBatch b;
  b.batch_id = require_string(j, "batch_id", ctx);
  b.round = static_cast<std::uint32_t>(require_int(j, "round", ctx));
  b.strategy = strategy_from_json(require_field(j, "strategy", ctx));
  b.budget = static_cast<std::size_t>(require_int(j, "budget", ctx));
  for (const auto& item : require_field(j, "items", ctx)) {
    b.items.push_back({normalized_instance_from_json(require_field(item, "instance", ctx)),
                       prediction_from_json(require_field(item, "prediction", ctx))});
  }
  if (j.contains("labeled")) b.labeled = j.at("labeled").get<std::vector<std::string>>();
  if (j.contains("skipped")) b.skipped = j.at("skipped").get<std::vector<std::string>>();
  return b;
}

SelectionBatch select_batch(std::span<const BatchItem> candidates, const SelectionStrategy& strategy,
                            std::size_t budget, std::string batch_id, std::uint32_t round) {
  validate(strategy);
  SelectionBatch batch;
  batch.batch_id = std::move(batch_id);
  batch.round = round;
  batch.strategy = strategy;
  batch.budget = budget;

  std::vector<const BatchItem*> picked;
  std::visit(
      overloaded{
          [&](const HighConfidenceScientific& h) {
            for (const auto& c : candidates) {
              if (c.prediction.predicted == SatdClass::scientific_debt &&
                  c.prediction.confidence >= h.tau_hi) {
                picked.push_back(&c);
              }
            }
            std::stable_sort(picked.begin(), picked.end(), [](auto* a, auto* b) {
              return a->prediction.confidence > b->prediction.confidence;
            });
          },
          [&](const LowConfidenceBorderline& l) {
            for (const auto& c : candidates) {
              if (c.prediction.confidence <= l.tau_lo || c.prediction.margin <= l.margin_max) {
                picked.push_back(&c);
              }
            }
            std::stable_sort(picked.begin(), picked.end(), [](auto* a, auto* b) {
              return a->prediction.confidence < b->prediction.confidence;
            });
          },
          [&](const StratifiedMisc& m) {
            std::array<std::vector<const BatchItem*>, kClassCount> by_class;
            for (const auto& c : candidates) by_class[index_of(c.prediction.predicted)].push_back(&c);
            for (auto& v : by_class) {
              std::stable_sort(v.begin(), v.end(), [](auto* a, auto* b) {
                return a->prediction.confidence > b->prediction.confidence;
              });
            }
            std::array<std::size_t, kClassCount> taken{};
            bool progress = true;
            while (progress && picked.size() < budget) {
              progress = false;
              for (std::size_t c = 0; c < kClassCount && picked.size() < budget; ++c) {
                if (taken[c] < m.quota[c] && taken[c] < by_class[c].size()) {
                  picked.push_back(by_class[c][taken[c]++]);
                  progress = true;
                }
              }
            }
          },
      },
      strategy);

  if (picked.size() > budget) picked.resize(budget);
  for (const auto* p : picked) batch.items.push_back(*p);
  return batch;
}

LabelSubmission label_submission_from_json(const json& j) {
  constexpr std::string_view ctx = "label submission";
  LabelSubmission s;
  s.instance_id = require_string(j, "instance_id", ctx);
  s.annotator = require_string(j, "annotator", ctx);
  if (j.contains("skip")) {
    if (!j.at("skip").is_boolean()) fail(ErrorCode::parse, "label submission: 'skip' must be a boolean");
    s.skip = j.at("skip").get<bool>();
  }
  if (!s.skip) s.label = parse_class(require_string(j, "label", ctx));
  if (j.contains("indicator") && !j.at("indicator").is_null()) {
    s.indicator = parse_indicator(require_string(j, "indicator", ctx));
  }
  return s;
}

AnnotationResult record_annotations(const SelectionBatch& batch,
                                    std::span<const LabelSubmission> labels, bool close_batch) {
  std::unordered_set<std::string> seen;
  for (const auto& s : labels) {
    if (!batch.find(s.instance_id)) {
      fail(ErrorCode::invalid_argument,
           "instance '" + s.instance_id + "' is not part of batch '" + batch.batch_id + "'");
    }
    if (!seen.insert(s.instance_id).second) {
      fail(ErrorCode::invalid_argument, "duplicate label for instance '" + s.instance_id + "'");
    }
    if (batch.is_resolved(s.instance_id)) {
      fail(ErrorCode::conflict, "instance '" + s.instance_id + "' is already labeled");
    }
    if (s.annotator.empty()) {
      fail(ErrorCode::invalid_argument, "annotator missing for instance '" + s.instance_id + "'");
    }
    if (!s.skip && !s.label) {
      fail(ErrorCode::invalid_argument, "label missing for instance '" + s.instance_id + "'");
    }
    if (s.indicator && (s.skip || s.label != SatdClass::scientific_debt)) {
      fail(ErrorCode::invalid_argument,
           "indicator given for non-scientific label on '" + s.instance_id + "'");
    }
  }

  AnnotationResult result;
  for (const auto& s : labels) {
    if (s.skip) {
      result.skipped.push_back(s.instance_id);
      continue;
    }
    LabeledInstance li;
    li.instance = batch.find(s.instance_id)->instance;
    li.label = *s.label;
    li.indicator = s.indicator;
    li.annotator = s.annotator;
    li.round = batch.round;
    li.origin = Origin::pseudo_label_verified;
    result.delta.push_back(std::move(li));
  }
  if (close_batch) {
    for (const auto& item : batch.items) {
      const auto& id = item.instance.instance_id;
      if (!seen.count(id) && !batch.is_resolved(id)) result.skipped.push_back(id);
    }
  }
  return result;
}

json to_json(const RoundRecord& r) {
  return json{{"round", r.round},
              {"model_hash", r.model_hash},
              {"dataset_ref", r.dataset_ref},
              {"batch_ids", r.batch_ids},
              {"selected", r.selected},
              {"labeled", r.labeled},
              {"skipped", r.skipped},
              {"dataset_size_before", r.dataset_size_before},
              {"dataset_size_after", r.dataset_size_after}};
}

RoundRecord round_record_from_json(const json& j) {
  constexpr std::string_view ctx = "round record";
  RoundRecord r;
  r.round = static_cast<std::uint32_t>(require_int(j, "round", ctx));
  r.model_hash = require_string(j, "model_hash", ctx);
  r.dataset_ref = require_string(j, "dataset_ref", ctx);
  r.batch_ids = require_field(j, "batch_ids", ctx).get<std::vector<std::string>>();
  r.selected = static_cast<std::size_t>(require_int(j, "selected", ctx));
  r.labeled = static_cast<std::size_t>(require_int(j, "labeled", ctx));
  r.skipped = static_cast<std::size_t>(require_int(j, "skipped", ctx));
  r.dataset_size_before = static_cast<std::size_t>(require_int(j, "dataset_size_before", ctx));
  r.dataset_size_after = static_cast<std::size_t>(require_int(j, "dataset_size_after", ctx));
  return r;
}

SelectionBatch* LoopState::find_batch(std::string_view batch_id) {
  for (auto& b : pending_batches) {
    if (b.batch_id == batch_id) return &b;
  }
  return nullptr;
}

json to_json(const LoopState& s) {
  json batches = json::array();
  for (const auto& b : s.pending_batches) batches.push_back(to_json(b));
  json history = json::array();
  for (const auto& r : s.history) history.push_back(to_json(r));
  return json{{"round", s.round},
              {"alpha", s.alpha},
              {"lambda", s.lambda},
              {"dataset_ref", s.dataset_ref},
              {"model_hash", s.model_hash},
              {"dataset_size_at_open", s.dataset_size_at_open},
              {"pending_batches", batches},
              {"history", history}};
}

LoopState loop_state_from_json(const json& j) {
  constexpr std::string_view ctx = "loop state";
  LoopState s;
  s.round = static_cast<std::uint32_t>(require_int(j, "round", ctx));
  s.alpha = require_field(j, "alpha", ctx).get<double>();
  s.lambda = require_field(j, "lambda", ctx).get<double>();
  s.dataset_ref = optional_string(j, "dataset_ref", ctx);
  s.model_hash = optional_string(j, "model_hash", ctx);
  if (j.contains("dataset_size_at_open")) s.dataset_size_at_open = j.at("dataset_size_at_open").get<std::size_t>();
  if (j.contains("pending_batches")) {
    for (const auto& b : j.at("pending_batches")) s.pending_batches.push_back(selection_batch_from_json(b));
  }
  if (j.contains("history")) {
    for (const auto& r : j.at("history")) s.history.push_back(round_record_from_json(r));
  }
  return s;
}

LoopState load_loop_state(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return LoopState{};
  return loop_state_from_json(parse_json(read_file(path), path.string()));
}

void save_loop_state(const LoopState& s, const std::filesystem::path& path) {
  write_file(path, to_json(s).dump(2) + "\n");
}

RoundOutput run_round(LoopState& state, const Dataset& dataset,
                      std::span<const NormalizedInstance> unlabeled, const LoopConfig& config,
                      const std::string& dataset_ref) {
  if (state.round_open()) {
    fail(ErrorCode::conflict, "round " + std::to_string(state.round) + " is still open");
  }
  for (const auto& plan : config.plans) validate(plan.strategy);

  TrainOptions options;
  options.alpha = config.alpha;
  options.lambda = config.lambda;
  NaiveBayesModel model = train(dataset, options);

  std::vector<BatchItem> candidates;
  std::unordered_set<std::string> seen;
  for (const auto& inst : unlabeled) {
    if (dataset.find(inst.instance_id) || !seen.insert(inst.instance_id).second) continue;
    candidates.push_back({inst, model.predict(inst)});
  }
  // The seed fixes the order that the stable sorts fall back on.
  Rng rng(config.seed);
  rng.shuffle(candidates);

  RoundOutput out{std::move(model), {}};
  std::unordered_set<std::string> taken;
  for (std::size_t i = 0; i < config.plans.size(); ++i) {
    const auto& plan = config.plans[i];
    std::vector<BatchItem> pool;
    for (const auto& c : candidates) {
      if (!taken.count(c.instance.instance_id)) pool.push_back(c);
    }
    const std::string id = "r" + std::to_string(state.round) + "-" +
                           std::string(strategy_name(plan.strategy)) + "-" + std::to_string(i);
    SelectionBatch batch = select_batch(pool, plan.strategy, plan.budget, id, state.round);
    for (const auto& item : batch.items) taken.insert(item.instance.instance_id);
    out.batches.push_back(std::move(batch));
  }

  state.alpha = config.alpha;
  state.lambda = config.lambda;
  state.dataset_ref = dataset_ref;
  state.model_hash = out.model.hash();
  state.dataset_size_at_open = dataset.size();
  state.pending_batches = out.batches;
  return out;
}

AnnotationResult submit_labels(LoopState& state, DatasetWriter& writer, std::string_view batch_id,
                               std::span<const LabelSubmission> labels, bool close_batch) {
  SelectionBatch* batch = state.find_batch(batch_id);
  if (!batch) fail(ErrorCode::not_found, "unknown batch '" + std::string(batch_id) + "'");
  AnnotationResult result = record_annotations(*batch, labels, close_batch);
  if (!result.delta.empty()) {
    writer.append(result.delta, "round " + std::to_string(batch->round) + " " + batch->batch_id);
  }
  for (const auto& li : result.delta) batch->labeled.push_back(li.instance.instance_id);
  for (const auto& id : result.skipped) batch->skipped.push_back(id);
  return result;
}

RoundRecord close_round(LoopState& state, const DatasetWriter& writer) {
  if (!state.round_open()) {
    fail(ErrorCode::conflict, "no round is open");
  }
  RoundRecord r;
  r.round = state.round;
  r.model_hash = state.model_hash;
  r.dataset_ref = state.dataset_ref;
  r.dataset_size_before = state.dataset_size_at_open;
  for (auto& b : state.pending_batches) {
    for (const auto& item : b.items) {
      if (!b.is_resolved(item.instance.instance_id)) b.skipped.push_back(item.instance.instance_id);
    }
    r.batch_ids.push_back(b.batch_id);
    r.selected += b.items.size();
    r.labeled += b.labeled.size();
    r.skipped += b.skipped.size();
  }
  r.dataset_size_after = writer.snapshot().size();
  state.history.push_back(r);
  state.pending_batches.clear();
  state.model_hash.clear();
  state.dataset_ref.clear();
  ++state.round;
  return r;
}

}  // namespace scidebt
