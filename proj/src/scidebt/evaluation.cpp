#include "scidebt/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "scidebt/error.hpp"
#include "scidebt/reporting.hpp"

namespace scidebt {

MetricsReport metrics_from_confusion(const ConfusionMatrix& confusion) {
  MetricsReport r;
  r.confusion = confusion;
  std::size_t trace = 0;
  std::array<std::size_t, kClassCount> row{}, col{};
  for (std::size_t t = 0; t < kClassCount; ++t) {
    for (std::size_t p = 0; p < kClassCount; ++p) {
      row[t] += confusion[t][p];
      col[p] += confusion[t][p];
      r.total += confusion[t][p];
    }
    trace += confusion[t][t];
  }
  double f1_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const double tp = static_cast<double>(confusion[c][c]);
    auto& m = r.per_class[c];
    m.support = row[c];
    m.precision = col[c] == 0 ? 0.0 : tp / static_cast<double>(col[c]);
    m.recall = row[c] == 0 ? 0.0 : tp / static_cast<double>(row[c]);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    r.present[c] = row[c] > 0 || col[c] > 0;
    if (r.present[c]) {
      f1_sum += m.f1;
      ++present;
    }
  }
  r.macro_f1 = present == 0 ? 0.0 : f1_sum / static_cast<double>(present);
  r.accuracy = r.total == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(r.total);
  return r;
}

MetricsReport evaluate_labels(std::span<const SatdClass> truth, std::span<const SatdClass> predicted) {
  if (truth.size() != predicted.size()) {
    fail(ErrorCode::invalid_argument, "truth and prediction vectors differ in length");
  }
  if (truth.empty()) fail(ErrorCode::invalid_argument, "cannot evaluate on an empty test set");
  ConfusionMatrix cm{};
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm[index_of(truth[i])][index_of(predicted[i])];
  return metrics_from_confusion(cm);
}

MetricsReport evaluate(const Scorer& model, const Dataset& test) {
  if (test.empty()) fail(ErrorCode::invalid_argument, "cannot evaluate on an empty test set");
  std::vector<SatdClass> truth, predicted;
  truth.reserve(test.size());
  predicted.reserve(test.size());
  for (const auto& li : test.instances) {
    truth.push_back(li.label);
    predicted.push_back(model.predict(li.instance).predicted);
  }
  return evaluate_labels(truth, predicted);
}

namespace {

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  return s;
}

}  // namespace

CrossValidationReport cross_validate(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                                     const TrainOptions& options) {
  const FoldPlan plan = stratified_folds(dataset, k, seed);
  CrossValidationReport report;
  std::vector<std::size_t> train_idx;
  for (std::size_t fold = 0; fold < k; ++fold) {
    train_idx.clear();
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      (plan.fold_of[i] == fold ? test_idx : train_idx).push_back(i);
    }
    const NaiveBayesModel model = train(subset(dataset, train_idx), options);
    report.folds.push_back(evaluate(model, subset(dataset, test_idx)));
  }

  std::vector<double> acc, mf1;
  for (const auto& f : report.folds) {
    acc.push_back(f.accuracy);
    mf1.push_back(f.macro_f1);
  }
  report.accuracy = summarize(acc);
  report.macro_f1 = summarize(mf1);
  for (std::size_t c = 0; c < kClassCount; ++c) {
    std::vector<double> p, r, f;
    for (const auto& fold : report.folds) {
      if (!fold.present[c]) continue;
      p.push_back(fold.per_class[c].precision);
      r.push_back(fold.per_class[c].recall);
      f.push_back(fold.per_class[c].f1);
    }
    report.precision[c] = summarize(p);
    report.recall[c] = summarize(r);
    report.f1[c] = summarize(f);
  }
  return report;
}

GridSearchResult grid_search(const Dataset& dataset, std::span<const double> alpha_grid,
                             std::span<const double> lambda_grid, std::size_t k,
                             std::uint64_t seed, bool single_head) {
  if (alpha_grid.empty() || lambda_grid.empty()) {
    fail(ErrorCode::invalid_argument, "grid search needs non-empty alpha and lambda grids");
  }
  GridSearchResult result;
  for (double a : alpha_grid) {
    for (double l : lambda_grid) {
      TrainOptions opts{.alpha = a, .lambda = l, .exclude = {}, .single_head = single_head};
      const auto cv = cross_validate(dataset, k, seed, opts);
      result.table.push_back({a, l, cv.macro_f1.mean, cv.accuracy.mean});
    }
  }
  auto better = [](const GridRow& x, const GridRow& y) {
    if (x.mean_macro_f1 != y.mean_macro_f1) return x.mean_macro_f1 > y.mean_macro_f1;
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    return x.lambda > y.lambda;
  };
  result.best = result.table.front();
  for (const auto& row : result.table) {
    if (better(row, result.best)) result.best = row;
  }
  return result;
}

ExclusionReport exclusion_experiment(const Dataset& dataset, double alpha, double lambda) {
  std::vector<std::size_t> held_out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.instances[i].label == SatdClass::scientific_debt) held_out.push_back(i);
  }
  if (held_out.empty()) {
    fail(ErrorCode::invalid_argument, "exclusion experiment needs scientific_debt instances");
  }
  TrainOptions opts{.alpha = alpha, .lambda = lambda, .exclude = {SatdClass::scientific_debt}};
  const NaiveBayesModel model = train(dataset, opts);

  ExclusionReport report;
  for (auto i : held_out) {
    Prediction p = model.predict(dataset.instances[i].instance);
    ++report.counts[index_of(p.predicted)];
    report.predictions.push_back(std::move(p));
  }
  report.total = held_out.size();
  return report;
}

HeadComparison compare_heads(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                             double alpha, double lambda) {
  HeadComparison cmp;
  cmp.multi_head = cross_validate(dataset, k, seed, {.alpha = alpha, .lambda = lambda});
  cmp.single_head =
      cross_validate(dataset, k, seed, {.alpha = alpha, .lambda = lambda, .single_head = true});
  return cmp;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string_view exclusion_label(SatdClass c) {
  constexpr std::array<std::string_view, kClassCount> names = {
      "requirement debt", "code/design debt", "documentation debt",
      "test debt",        "scientific debt",  "non-debt"};
  return names[index_of(c)];
}

std::string render_metrics_csv(const MetricsReport& r) {
  std::ostringstream out;
  out << "class,precision,recall,f1,support\n";
  for (auto c : kAllClasses) {
    const auto& m = r.per_class[index_of(c)];
    out << to_string(c) << ',' << format_fixed(m.precision, 4) << ',' << format_fixed(m.recall, 4)
        << ',' << format_fixed(m.f1, 4) << ',' << m.support << '\n';
  }
  out << "macro_f1,,," << format_fixed(r.macro_f1, 4) << ',' << r.total << '\n';
  out << "accuracy,,," << format_fixed(r.accuracy, 4) << ',' << r.total << '\n';
  return out.str();
}

json to_json(const MetricsReport& r) {
  json per_class = json::object();
  for (auto c : kAllClasses) {
    const auto& m = r.per_class[index_of(c)];
    per_class[std::string(to_string(c))] = {{"precision", m.precision},
                                            {"recall", m.recall},
                                            {"f1", m.f1},
                                            {"support", m.support},
                                            {"present", static_cast<bool>(r.present[index_of(c)])}};
  }
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  return json{{"per_class", per_class}, {"macro_f1", r.macro_f1}, {"accuracy", r.accuracy},
              {"total", r.total},       {"confusion", confusion}};
}

namespace {

json summary_json(const MetricSummary& s) {
  return json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

void summary_row(std::ostringstream& out, std::string_view name, const MetricSummary& s) {
  out << name << ',' << format_fixed(s.mean, 4) << ',' << format_fixed(s.min, 4) << ','
      << format_fixed(s.max, 4) << '\n';
}

}  // namespace

std::string render_cross_validation_csv(const CrossValidationReport& r) {
  std::ostringstream out;
  out << "metric,mean,min,max\n";
  for (auto c : kAllClasses) {
    const std::string name(to_string(c));
    summary_row(out, name + ".precision", r.precision[index_of(c)]);
    summary_row(out, name + ".recall", r.recall[index_of(c)]);
    summary_row(out, name + ".f1", r.f1[index_of(c)]);
  }
  summary_row(out, "macro_f1", r.macro_f1);
  summary_row(out, "accuracy", r.accuracy);
  return out.str();
}

json to_json(const CrossValidationReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds) folds.push_back(to_json(f));
  json per_class = json::object();
  for (auto c : kAllClasses) {
    per_class[std::string(to_string(c))] = {{"precision", summary_json(r.precision[index_of(c)])},
                                            {"recall", summary_json(r.recall[index_of(c)])},
                                            {"f1", summary_json(r.f1[index_of(c)])}};
  }
  return json{{"folds", folds},
              {"accuracy", summary_json(r.accuracy)},
              {"macro_f1", summary_json(r.macro_f1)},
              {"per_class", per_class}};
}

std::string render_grid_csv(const GridSearchResult& g) {
  std::ostringstream out;
  out << "alpha,lambda,mean_macro_f1,mean_accuracy,best\n";
  for (const auto& row : g.table) {
    const bool best = row.alpha == g.best.alpha && row.lambda == g.best.lambda;
    out << format_fixed(row.alpha, 3) << ',' << format_fixed(row.lambda, 3) << ','
        << format_fixed(row.mean_macro_f1, 4) << ',' << format_fixed(row.mean_accuracy, 4) << ','
        << (best ? 1 : 0) << '\n';
  }
  return out.str();
}

json to_json(const GridSearchResult& g) {
  json rows = json::array();
  for (const auto& row : g.table) {
    rows.push_back({{"alpha", row.alpha},
                    {"lambda", row.lambda},
                    {"mean_macro_f1", row.mean_macro_f1},
                    {"mean_accuracy", row.mean_accuracy}});
  }
  return json{{"table", rows},
              {"best", {{"alpha", g.best.alpha}, {"lambda", g.best.lambda},
                        {"mean_macro_f1", g.best.mean_macro_f1}}}};
}

namespace {

std::vector<SatdClass> exclusion_order(const ExclusionReport& r) {
  std::vector<SatdClass> order;
  for (auto c : kAllClasses) {
    if (c != SatdClass::scientific_debt) order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(), [&](SatdClass a, SatdClass b) {
    return r.counts[index_of(a)] > r.counts[index_of(b)];
  });
  return order;
}

}  // namespace

std::string render_exclusion_csv(const ExclusionReport& r) {
  std::ostringstream out;
  out << "Predicted Label,Count\n";
  for (auto c : exclusion_order(r)) out << exclusion_label(c) << ',' << csv_cell(format_count(r.counts[index_of(c)])) << '\n';
  out << "Total," << csv_cell(format_count(r.total)) << '\n';
  return out.str();
}

json to_json(const ExclusionReport& r) {
  json rows = json::array();
  for (auto c : exclusion_order(r)) {
    rows.push_back({{"label", to_string(c)}, {"count", r.counts[index_of(c)]}});
  }
  return json{{"rows", rows}, {"total", r.total}};
}

}  // namespace scidebt
