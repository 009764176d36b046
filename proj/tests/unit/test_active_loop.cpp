#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "scidebt/active_loop.hpp"

using namespace scidebt;
using gen::labeled;

namespace {

const std::array<std::string, kClassCount> kWords = {"require", "refactor", "docs", "test", "assume", "fine"};

std::string random_text(Rng& rng) {
  std::string t;
  for (std::size_t i = 0, n = 1 + rng.below(4); i < n; ++i) {
    t += (t.empty() ? "" : " ") + kWords[rng.below(kClassCount)];
  }
  return t;
}

Dataset seed_dataset() {
  Dataset d;
  int i = 0;
  for (auto c : kAllClasses) {
    for (int k = 0; k < 4; ++k) {
      d.instances.push_back(labeled("seed" + std::to_string(i++), kAllKinds[k], kWords[index_of(c)] + " note", c));
    }
  }
  return d;
}

std::vector<NormalizedInstance> unlabeled_pool(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NormalizedInstance> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(make_instance("u" + std::to_string(i), kAllKinds[rng.below(4)], random_text(rng)));
  }
  return v;
}

BatchItem item(std::string id, SatdClass predicted, double confidence, double margin) {
  BatchItem b;
  b.instance = make_instance(id, ArtifactKind::code_comment, "text");
  b.prediction.instance_id = id;
  b.prediction.predicted = predicted;
  b.prediction.confidence = confidence;
  b.prediction.margin = margin;
  b.prediction.scores[index_of(predicted)] = confidence;
  return b;
}

LabelSubmission sub(std::string id, SatdClass c, std::string who = "ann") {
  return {std::move(id), c, std::nullopt, std::move(who), false};
}

std::vector<std::string> ids_of(const SelectionBatch& b) {
  std::vector<std::string> v;
  for (const auto& i : b.items) v.push_back(i.instance.instance_id);
  return v;
}

}  // namespace

TEST_SUITE("active_loop") {

TEST_CASE("high confidence threshold example") {
  const std::vector<BatchItem> c = {item("a", SatdClass::scientific_debt, 0.95, 0.9),
                                    item("b", SatdClass::scientific_debt, 0.91, 0.85),
                                    item("c", SatdClass::scientific_debt, 0.85, 0.7),
                                    item("d", SatdClass::non_debt, 0.99, 0.98)};
  const auto b = select_batch(c, HighConfidenceScientific{0.9}, 10);
  CHECK(ids_of(b) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("borderline disjunction example") {
  const std::vector<BatchItem> c = {item("low", SatdClass::non_debt, 0.55, 0.3),
                                    item("close", SatdClass::test_debt, 0.8, 0.05),
                                    item("clear", SatdClass::test_debt, 0.8, 0.5)};
  const auto b = select_batch(c, LowConfidenceBorderline{0.6, 0.1}, 10);
  CHECK(ids_of(b) == std::vector<std::string>{"low", "close"});
}

TEST_CASE("budget one picks the top-priority item deterministically") {
  std::vector<BatchItem> c;
  for (int i = 0; i < 5; ++i) c.push_back(item("s" + std::to_string(i), SatdClass::scientific_debt, 0.91 + 0.01 * i, 0.5));
  const auto b = select_batch(c, HighConfidenceScientific{0.9}, 1);
  CHECK(ids_of(b) == std::vector<std::string>{"s4"});
  CHECK(ids_of(select_batch(c, HighConfidenceScientific{0.9}, 1)) == ids_of(b));
}

TEST_CASE("stratified quotas round robin") {
  std::vector<BatchItem> c;
  for (int i = 0; i < 6; ++i) c.push_back(item("n" + std::to_string(i), SatdClass::non_debt, 0.5 + 0.01 * i, 0.1));
  for (int i = 0; i < 2; ++i) c.push_back(item("t" + std::to_string(i), SatdClass::test_debt, 0.7, 0.1));
  StratifiedMisc s;
  s.quota.fill(3);
  const auto b = select_batch(c, s, 100);
  CHECK(b.items.size() == 5);
  std::size_t non = 0;
  for (const auto& it : b.items) non += it.prediction.predicted == SatdClass::non_debt;
  CHECK(non == 3);
  CHECK(select_batch(c, s, 2).items.size() == 2);
}

TEST_CASE("strategy validation and json") {
  CHECK_THROWS_AS(validate(SelectionStrategy{HighConfidenceScientific{1.0}}), Error);
  CHECK_THROWS_AS(validate(SelectionStrategy{LowConfidenceBorderline{0.0, 0.1}}), Error);
  CHECK_THROWS_AS(validate(SelectionStrategy{LowConfidenceBorderline{0.5, 1.0}}), Error);
  for (const SelectionStrategy& s : {SelectionStrategy{HighConfidenceScientific{0.8}},
                                     SelectionStrategy{LowConfidenceBorderline{0.4, 0.2}},
                                     SelectionStrategy{StratifiedMisc{}}}) {
    CHECK(to_json(strategy_from_json(to_json(s))) == to_json(s));
  }
}

TEST_CASE("record annotations examples") {
  SelectionBatch batch;
  batch.batch_id = "b";
  batch.round = 4;
  batch.items = {item("x", SatdClass::non_debt, 0.5, 0.1), item("y", SatdClass::non_debt, 0.5, 0.1),
                 item("z", SatdClass::non_debt, 0.5, 0.1)};
  const std::vector<LabelSubmission> two = {sub("x", SatdClass::test_debt), sub("y", SatdClass::non_debt)};
  const auto r = record_annotations(batch, two);
  CHECK(r.delta.size() == 2);
  CHECK(r.skipped == std::vector<std::string>{"z"});
  for (const auto& li : r.delta) {
    CHECK(li.origin == Origin::pseudo_label_verified);
    CHECK(li.round == 4);
  }

  LabelSubmission sci = sub("z", SatdClass::scientific_debt);
  sci.indicator = Indicator::assumption;
  const std::vector<LabelSubmission> with_indicator = {sci};
  const auto s = record_annotations(batch, with_indicator);
  REQUIRE(s.delta.size() == 1);
  CHECK(s.delta[0].indicator == Indicator::assumption);

  auto code_of = [&](std::vector<LabelSubmission> subs) {
    try {
      record_annotations(batch, subs);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io;  // sentinel: no error
  };
  CHECK(code_of({sub("foreign", SatdClass::non_debt)}) == ErrorCode::invalid_argument);
  CHECK(code_of({sub("x", SatdClass::non_debt), sub("x", SatdClass::test_debt)}) == ErrorCode::invalid_argument);
  CHECK(code_of({sub("x", SatdClass::non_debt, "")}) == ErrorCode::invalid_argument);
  LabelSubmission wrong = sub("x", SatdClass::test_debt);
  wrong.indicator = Indicator::assumption;
  CHECK(code_of({wrong}) == ErrorCode::invalid_argument);
  batch.labeled = {"x"};
  CHECK(code_of({sub("x", SatdClass::non_debt)}) == ErrorCode::conflict);
}

TEST_CASE("rounds are deterministic and batches sound and disjoint") {
  const auto ds = seed_dataset();
  const auto pool = unlabeled_pool(800, 3);
  LoopConfig cfg;
  cfg.seed = 11;
  cfg.plans = {{HighConfidenceScientific{0.6}, 30}, {LowConfidenceBorderline{0.6, 0.1}, 30}, {StratifiedMisc{}, 60}};
  LoopState s1, s2;
  const auto o1 = run_round(s1, ds, pool, cfg);
  const auto o2 = run_round(s2, ds, pool, cfg);
  REQUIRE(o1.batches.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(to_json(o1.batches[i]) == to_json(o2.batches[i]));
  CHECK(o1.model.serialize() == train(ds, {.alpha = cfg.alpha, .lambda = cfg.lambda}).serialize());

  std::set<std::string> seen;
  for (const auto& b : o1.batches) {
    CHECK(b.items.size() <= b.budget);
    for (const auto& it : b.items) CHECK(seen.insert(it.instance.instance_id).second);
  }
  for (const auto& it : o1.batches[0].items) {
    CHECK(it.prediction.predicted == SatdClass::scientific_debt);
    CHECK(it.prediction.confidence >= 0.6);
  }
  for (const auto& it : o1.batches[1].items) {
    CHECK((it.prediction.confidence <= 0.6 || it.prediction.margin <= 0.1));
  }

  CHECK_THROWS_AS(run_round(s1, ds, pool, cfg), Error);
}

TEST_CASE("verified annotations grow the next round's dataset exactly") {
  gen::TempDir dir("loop-growth");
  save_dataset(seed_dataset(), dir / "ds.jsonl");
  DatasetWriter writer(dir / "ds.jsonl");
  const auto pool = unlabeled_pool(500, 8);
  LoopConfig cfg;
  cfg.plans = {{StratifiedMisc{}, 80}};
  LoopState state;
  const std::size_t before = writer.snapshot().size();
  auto out = run_round(state, writer.snapshot(), pool, cfg);
  REQUIRE(out.batches[0].items.size() >= 50);
  std::vector<LabelSubmission> labels;
  for (std::size_t i = 0; i < 50; ++i) {
    labels.push_back(sub(out.batches[0].items[i].instance.instance_id, SatdClass::non_debt));
  }
  submit_labels(state, writer, out.batches[0].batch_id, labels);
  const auto rec = close_round(state, writer);
  CHECK(rec.labeled == 50);
  CHECK(rec.skipped == out.batches[0].items.size() - 50);
  CHECK(rec.dataset_size_after == before + 50);
  CHECK(state.round == 2);

  auto next = run_round(state, writer.snapshot(), pool, cfg);
  CHECK(state.dataset_size_at_open == before + 50);
  // Labeled items are no longer candidates.
  std::set<std::string> done;
  for (const auto& l : labels) done.insert(l.instance_id);
  for (const auto& it : next.batches[0].items) CHECK_FALSE(done.count(it.instance.instance_id));
  CHECK_THROWS_AS(submit_labels(state, writer, "nope", labels), Error);
}

TEST_CASE("ten rounds leave ten history entries") {
  gen::TempDir dir("loop-ten");
  save_dataset(seed_dataset(), dir / "ds.jsonl");
  DatasetWriter writer(dir / "ds.jsonl");
  const auto pool = unlabeled_pool(1000, 2);
  LoopConfig cfg;
  cfg.plans = {{LowConfidenceBorderline{}, 10}, {StratifiedMisc{}, 20}};
  LoopState state;
  for (int r = 1; r <= 10; ++r) {
    auto out = run_round(state, writer.snapshot(), pool, cfg, writer.hash());
    CHECK(state.round == static_cast<std::uint32_t>(r));
    std::vector<LabelSubmission> labels;
    // Round 5 annotates nothing and must still close.
    for (std::size_t i = 0; r != 5 && i < std::min<std::size_t>(5, out.batches[1].items.size()); ++i) {
      const auto& it = out.batches[1].items[i];
      labels.push_back(sub(it.instance.instance_id, it.prediction.predicted));
    }
    if (!labels.empty()) submit_labels(state, writer, out.batches[1].batch_id, labels);
    close_round(state, writer);
  }
  REQUIRE(state.history.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(state.history[i].round == i + 1);
    CHECK(state.history[i].dataset_size_after >= state.history[i].dataset_size_before);
    if (i) CHECK(state.history[i].dataset_size_before == state.history[i - 1].dataset_size_after);
  }
  CHECK(state.history[4].labeled == 0);
  CHECK(state.history[4].dataset_size_after == state.history[4].dataset_size_before);

  // The loop-verified rows carry strictly increasing rounds.
  std::uint32_t last = 0;
  for (const auto& li : writer.snapshot().instances) {
    if (li.origin != Origin::pseudo_label_verified) continue;
    CHECK(li.round >= last);
    last = li.round;
  }
  CHECK(last == 10);
}

TEST_CASE("loop state survives a json round trip") {
  gen::TempDir dir("loop-state");
  LoopState state;
  LoopConfig cfg;
  cfg.plans = {{StratifiedMisc{}, 10}};
  run_round(state, seed_dataset(), unlabeled_pool(50, 1), cfg, "abc");
  save_loop_state(state, dir / "state.json");
  const auto back = load_loop_state(dir / "state.json");
  CHECK(to_json(back) == to_json(state));
  CHECK(load_loop_state(dir / "absent.json").round == 1);
}

}  // TEST_SUITE
