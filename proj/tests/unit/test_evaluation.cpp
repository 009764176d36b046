#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scidebt/evaluation.hpp"

using namespace scidebt;
using gen::labeled;

namespace {

// Each class owns a disjoint word, so a trained model separates perfectly.
Dataset separable(std::size_t per_class) {
  static const std::array<std::string, kClassCount> words = {"alpha", "bravo", "charlie",
                                                             "delta", "echo", "foxtrot"};
  Dataset d;
  for (auto c : kAllClasses) {
    for (std::size_t i = 0; i < per_class; ++i) {
      d.instances.push_back(labeled(std::string(to_string(c)) + std::to_string(i),
                                    kAllKinds[i % 4], words[index_of(c)] + " " + words[index_of(c)],
                                    c));
    }
  }
  return d;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("degenerate predictor hand computation") {
  const std::vector<SatdClass> truth = {SatdClass::non_debt, SatdClass::non_debt, SatdClass::non_debt,
                                        SatdClass::scientific_debt, SatdClass::scientific_debt};
  const std::vector<SatdClass> pred(5, SatdClass::non_debt);
  const auto r = evaluate_labels(truth, pred);
  const auto& nd = r.per_class[index_of(SatdClass::non_debt)];
  CHECK(nd.precision == doctest::Approx(0.6));
  CHECK(nd.recall == doctest::Approx(1.0));
  CHECK(nd.f1 == doctest::Approx(0.75));
  CHECK(r.per_class[index_of(SatdClass::scientific_debt)].f1 == 0.0);
  CHECK(r.macro_f1 == doctest::Approx(0.375));
}

TEST_CASE("perfect predictions") {
  const std::vector<SatdClass> truth = {SatdClass::test_debt, SatdClass::non_debt, SatdClass::requirement_debt};
  const auto r = evaluate_labels(truth, truth);
  CHECK(r.accuracy == 1.0);
  CHECK(r.macro_f1 == 1.0);
  for (auto c : truth) {
    CHECK(r.per_class[index_of(c)].precision == 1.0);
    CHECK(r.per_class[index_of(c)].recall == 1.0);
  }
}

TEST_CASE("metrics recomputed from the confusion matrix") {
  Rng rng(10);
  for (int t = 0; t < 200; ++t) {
    std::vector<SatdClass> truth, pred;
    for (std::size_t i = 0, n = 1 + rng.below(60); i < n; ++i) {
      truth.push_back(kAllClasses[rng.below(6)]);
      pred.push_back(kAllClasses[rng.below(6)]);
    }
    const auto r = evaluate_labels(truth, pred);
    std::size_t trace = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) trace += r.confusion[c][c];
    CHECK(r.accuracy == doctest::Approx(static_cast<double>(trace) / truth.size()));
    double f1_sum = 0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < kClassCount; ++c) {
      std::size_t tp = r.confusion[c][c], fp = 0, fn = 0;
      for (std::size_t o = 0; o < kClassCount; ++o) {
        if (o == c) continue;
        fp += r.confusion[o][c];
        fn += r.confusion[c][o];
      }
      const double p = tp + fp ? double(tp) / (tp + fp) : 0.0;
      const double rc = tp + fn ? double(tp) / (tp + fn) : 0.0;
      const double f1 = p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
      CHECK(r.per_class[c].f1 == doctest::Approx(f1));
      CHECK(r.per_class[c].f1 >= 0.0);
      CHECK(r.per_class[c].f1 <= 1.0);
      if (tp + fp + fn > 0) {
        f1_sum += f1;
        ++present;
      }
    }
    CHECK(r.macro_f1 == doctest::Approx(f1_sum / present));
  }
}

TEST_CASE("evaluate rejects an empty test set") {
  const auto m = train(separable(3), {});
  CHECK_THROWS_AS(evaluate(m, Dataset{}), Error);
}

TEST_CASE("cross validation structure and aggregate") {
  Rng rng(3);
  Dataset ds;
  const std::vector<std::string> words = {"fix", "hack", "todo", "test", "docs", "fine", "model", "grid"};
  for (int i = 0; i < 300; ++i) {
    const auto c = kAllClasses[rng.below(6)];
    std::string t = words[index_of(c)] + " " + words[rng.below(words.size())];
    ds.instances.push_back(labeled("i" + std::to_string(i), kAllKinds[rng.below(4)], t, c));
  }
  const auto cv = cross_validate(ds, 3, 42, {});
  REQUIRE(cv.folds.size() == 3);
  double sum = 0, lo = 1, hi = 0;
  for (const auto& f : cv.folds) {
    sum += f.macro_f1;
    lo = std::min(lo, f.macro_f1);
    hi = std::max(hi, f.macro_f1);
  }
  CHECK(cv.macro_f1.mean == doctest::Approx(sum / 3));
  CHECK(cv.macro_f1.min == lo);
  CHECK(cv.macro_f1.max == hi);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto sep = cross_validate(separable(9), 3, seed, {});
    for (const auto& f : sep.folds) CHECK(f.macro_f1 == 1.0);
  }
}

TEST_CASE("grid search") {
  // Three docs per (kind, class) cell, so every training fold keeps each
  // class present in each head and even lambda=1 separates perfectly.
  const auto ds = separable(12);
  const auto g = grid_search(ds, kDefaultAlphaGrid, kDefaultLambdaGrid, 3, 1);
  CHECK(g.table.size() == 9);
  double best = 0;
  for (const auto& row : g.table) best = std::max(best, row.mean_macro_f1);
  CHECK(g.best.mean_macro_f1 == best);
  for (const auto& row : g.table) CHECK(row.mean_macro_f1 == 1.0);
  // All points tie: smaller alpha, then larger lambda.
  CHECK(g.best.alpha == 0.1);
  CHECK(g.best.lambda == 1.0);

  const std::vector<double> a = {0.5}, l = {0.0};
  const auto single = grid_search(ds, a, l, 3, 1);
  CHECK(single.table.size() == 1);
  CHECK(single.best.alpha == 0.5);
  CHECK(single.best.lambda == 0.0);
}

TEST_CASE("exclusion experiment") {
  auto ds = separable(5);
  const auto r = exclusion_experiment(ds);
  CHECK(r.total == 5);
  CHECK(r.counts[index_of(SatdClass::scientific_debt)] == 0);
  std::size_t sum = 0;
  for (auto v : r.counts) sum += v;
  CHECK(sum == r.total);

  // Scientific texts duplicated verbatim as non_debt training data.
  Dataset dup;
  for (int i = 0; i < 6; ++i) {
    const std::string t = "we assume constant density " + std::string(1, char('a' + i));
    dup.instances.push_back(labeled("n" + std::to_string(i), ArtifactKind::code_comment, t, SatdClass::non_debt));
    dup.instances.push_back(labeled("s" + std::to_string(i), ArtifactKind::code_comment, t, SatdClass::scientific_debt));
    dup.instances.push_back(labeled("t" + std::to_string(i), ArtifactKind::code_comment, "add unit test", SatdClass::test_debt));
  }
  const auto d = exclusion_experiment(dup);
  CHECK(d.counts[index_of(SatdClass::non_debt)] == 6);

  CHECK_THROWS_AS(exclusion_experiment(separable(0)), Error);
  Dataset no_sci;
  no_sci.instances = {labeled("x", ArtifactKind::code_comment, "a", SatdClass::non_debt)};
  CHECK_THROWS_AS(exclusion_experiment(no_sci), Error);
}

TEST_CASE("exclusion csv sorts by count and ends with the total") {
  ExclusionReport r;
  r.counts[index_of(SatdClass::non_debt)] = 751;
  r.counts[index_of(SatdClass::code_design_debt)] = 256;
  r.counts[index_of(SatdClass::requirement_debt)] = 72;
  r.counts[index_of(SatdClass::test_debt)] = 28;
  r.counts[index_of(SatdClass::documentation_debt)] = 2;
  r.total = 1109;
  const auto csv = render_exclusion_csv(r);
  const auto nd = csv.find("non-debt"), cd = csv.find("code/design debt"), doc = csv.find("documentation debt");
  CHECK(nd < cd);
  CHECK(cd < doc);
  CHECK(csv.find("1,109") != std::string::npos);
  CHECK(csv.find("scientific") == std::string::npos);
}

TEST_CASE("head comparison runs both configurations") {
  const auto h = compare_heads(separable(6), 3, 5, 1.0, 0.5);
  CHECK(h.multi_head.folds.size() == 3);
  CHECK(h.single_head.folds.size() == 3);
}

}  // TEST_SUITE
