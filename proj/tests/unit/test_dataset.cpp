#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "scidebt/dataset.hpp"

using namespace scidebt;
using gen::labeled;

namespace {

Dataset named(std::string tag, std::size_t n, std::size_t first = 0) {
  Dataset d;
  d.lineage = {std::move(tag)};
  for (std::size_t i = first; i < first + n; ++i) {
    d.instances.push_back(labeled("id" + std::to_string(i), ArtifactKind::code_comment, "text",
                                  SatdClass::non_debt));
  }
  return d;
}

// Max minus min fold count per (kind, label) cell, computed from scratch.
std::size_t worst_cell_imbalance(const Dataset& ds, const FoldPlan& plan) {
  std::map<std::pair<ArtifactKind, SatdClass>, std::vector<std::size_t>> per_cell;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto& counts = per_cell[{ds.instances[i].instance.kind, ds.instances[i].label}];
    counts.resize(plan.k, 0);
    ++counts[plan.fold_of[i]];
  }
  std::size_t worst = 0;
  for (auto& [cell, counts] : per_cell) {
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    worst = std::max(worst, *hi - *lo);
  }
  return worst;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("merge examples") {
  const std::vector<Dataset> ab = {named("A", 10), named("B", 5, 10)};
  auto m = merge(ab);
  CHECK(m.size() == 15);
  CHECK(m.lineage == std::vector<std::string>{"A", "B"});

  const std::vector<Dataset> same = {named("A", 3), named("B", 1, 2)};
  CHECK(merge(same).size() == 3);

  auto other = named("B", 1, 2);
  other.instances[0].label = SatdClass::test_debt;
  const std::vector<Dataset> clash = {named("A", 3), other};
  try {
    merge(clash);
    FAIL("expected conflict");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::conflict);
    CHECK(std::string(e.what()).find("id2") != std::string::npos);
  }
}

TEST_CASE("merge is associative on instances and idempotent") {
  const auto a = named("A", 4), b = named("B", 4, 2), c = named("C", 3, 5);
  const std::vector<Dataset> ab = {a, b}, bc = {b, c};
  const std::vector<Dataset> left = {merge(ab), c}, right = {a, merge(bc)};
  CHECK(merge(left).instances == merge(right).instances);
  const std::vector<Dataset> aa = {a, a};
  CHECK(merge(aa).instances == a.instances);
}

TEST_CASE("distribution examples") {
  CHECK(distribution(Dataset{}).total() == 0);
  Dataset d;
  d.instances = {labeled("1", ArtifactKind::code_comment, "a", SatdClass::test_debt),
                 labeled("2", ArtifactKind::commit_message, "b", SatdClass::test_debt),
                 labeled("3", ArtifactKind::issue_section, "c", SatdClass::test_debt)};
  const auto t = distribution(d);
  const auto& row = t.counts[index_of(SatdClass::test_debt)];
  CHECK(row == std::array<std::size_t, 4>{1, 1, 1, 0});
  CHECK(t.row_total(SatdClass::test_debt) == 3);
  CHECK(t.total() == 3);
}

TEST_CASE("distribution cells sum to the cardinality") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = gen::random_dataset(rng, rng.below(400));
    const auto t = distribution(ds);
    std::size_t sum = 0;
    for (const auto& row : t.counts) {
      for (auto v : row) sum += v;
    }
    CHECK(sum == ds.size());
    CHECK(t.total() == ds.size());
  }
}

TEST_CASE("stratified folds examples") {
  Dataset d;
  for (int i = 0; i < 6; ++i) d.instances.push_back(labeled("a" + std::to_string(i), ArtifactKind::code_comment, "x", SatdClass::test_debt));
  for (int i = 0; i < 4; ++i) d.instances.push_back(labeled("b" + std::to_string(i), ArtifactKind::code_comment, "x", SatdClass::non_debt));
  const auto plan = stratified_folds(d, 2, 1);
  for (std::size_t f = 0; f < 2; ++f) {
    std::size_t a = 0, b = 0;
    for (auto i : plan.members(f)) (d.instances[i].label == SatdClass::test_debt ? a : b)++;
    CHECK(a == 3);
    CHECK(b == 2);
  }

  Dataset five;
  for (int i = 0; i < 5; ++i) five.instances.push_back(labeled("a" + std::to_string(i), ArtifactKind::code_comment, "x", SatdClass::test_debt));
  const auto p5 = stratified_folds(five, 2, 3);
  const auto s0 = p5.members(0).size(), s1 = p5.members(1).size();
  CHECK(std::max(s0, s1) == 3);
  CHECK(std::min(s0, s1) == 2);

  CHECK_THROWS_AS(stratified_folds(five, 6, 1), Error);
}

TEST_CASE("stratified folds properties") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ds = gen::random_dataset(rng, 50 + rng.below(600));
    for (std::size_t k : {3u, 5u}) {
      const auto plan = stratified_folds(ds, k, trial);
      CHECK(worst_cell_imbalance(ds, plan) <= 1);
      std::size_t covered = 0;
      for (std::size_t f = 0; f < k; ++f) covered += plan.members(f).size();
      CHECK(covered == ds.size());
      CHECK(plan.assignment.size() == ds.size());
      CHECK(stratified_folds(ds, k, trial).fold_of == plan.fold_of);
    }
  }
}

TEST_CASE("sample size") {
  CHECK(sample_size(0.95, 0.05) == 384);
  // 1.96^2 * 0.25 / 0.05^2 = 3.8416 * 0.25 / 0.0025 = 384.16
  CHECK(std::abs(sample_size_raw(0.95, 0.05) - 384.16) < 1e-9);
  CHECK(sample_size(0.95, 0.99) == 1);
  CHECK_THROWS_AS(sample_size(0.95, 0.0), Error);
  CHECK_THROWS_AS(sample_size(0.95, -0.1), Error);
  double prev = 1e18;
  for (double m = 0.01; m < 0.5; m += 0.01) {
    const double s = sample_size_raw(0.95, m);
    CHECK(s < prev);
    prev = s;
  }
  CHECK(sample_size_raw(0.90, 0.05) < sample_size_raw(0.95, 0.05));
  CHECK(sample_size_raw(0.95, 0.05) < sample_size_raw(0.99, 0.05));
}

TEST_CASE("writer appends and refuses relabeling") {
  gen::TempDir dir("dataset-writer");
  DatasetWriter w(dir / "ds.jsonl");
  CHECK(w.snapshot().empty());
  const std::vector<LabeledInstance> delta = {labeled("a", ArtifactKind::code_comment, "fix it", SatdClass::test_debt)};
  w.append(delta, "round 1");
  CHECK(w.snapshot().size() == 1);
  CHECK(read_file(dir / "ds.jsonl") == serialize_delta(delta));
  try {
    w.append(delta);
    FAIL("expected conflict");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::conflict);
  }
  const std::vector<LabeledInstance> bad = {labeled("b", ArtifactKind::code_comment, "Not Normal", SatdClass::test_debt)};
  CHECK_THROWS_AS(w.append(bad), Error);
  CHECK(w.snapshot().size() == 1);

  const auto reloaded = load_dataset(dir / "ds.jsonl");
  CHECK(reloaded.instances == w.snapshot().instances);
  CHECK(reloaded.lineage == w.snapshot().lineage);
  CHECK(w.hash() == to_hex(fnv1a64(read_file(dir / "ds.jsonl"))));
}

TEST_CASE("labeled instance json round trip") {
  auto li = labeled("x", ArtifactKind::issue_section, "we assume dt is small", SatdClass::scientific_debt);
  li.indicator = Indicator::assumption;
  li.round = 3;
  li.origin = Origin::pseudo_label_verified;
  CHECK(labeled_instance_from_json(to_json(li)) == li);
  const auto j = to_json(li);
  for (const char* f : {"instance_id", "kind", "text", "label", "indicator", "annotator", "round", "origin"}) {
    CHECK(j.contains(f));
  }

  auto bad = to_json(li);
  bad["label"] = "non_debt";
  CHECK_THROWS_AS(labeled_instance_from_json(bad), Error);
}

}  // TEST_SUITE
