#include "scidebt/agreement.hpp"

#include <algorithm>
#include <sstream>

#include "scidebt/error.hpp"

namespace scidebt {

AgreementReport cohens_kappa(std::span<const std::string> labels_a,
                             std::span<const std::string> labels_b) {
  if (labels_a.size() != labels_b.size()) {
    fail(ErrorCode::invalid_argument, "label vectors differ in length (" +
                                          std::to_string(labels_a.size()) + " vs " +
                                          std::to_string(labels_b.size()) + ")");
  }
  if (labels_a.empty()) fail(ErrorCode::invalid_argument, "kappa needs at least one label pair");

  AgreementReport r;
  r.n = labels_a.size();
  r.labels.assign(labels_a.begin(), labels_a.end());
  r.labels.insert(r.labels.end(), labels_b.begin(), labels_b.end());
  std::sort(r.labels.begin(), r.labels.end());
  r.labels.erase(std::unique(r.labels.begin(), r.labels.end()), r.labels.end());

  const std::size_t L = r.labels.size();
  auto idx = [&](const std::string& s) {
    return static_cast<std::size_t>(std::lower_bound(r.labels.begin(), r.labels.end(), s) -
                                    r.labels.begin());
  };
  r.confusion.assign(L, std::vector<std::size_t>(L, 0));
  std::vector<std::size_t> marg_a(L, 0), marg_b(L, 0);
  for (std::size_t i = 0; i < r.n; ++i) {
    const std::size_t a = idx(labels_a[i]);
    const std::size_t b = idx(labels_b[i]);
    ++r.confusion[a][b];
    ++marg_a[a];
    ++marg_b[b];
    if (a == b) ++r.agreements;
  }
  // Integer numerator keeps p_e exact: sum_c (n_a(c) * n_b(c)) / n^2.
  unsigned long long chance = 0;
  for (std::size_t c = 0; c < L; ++c) {
    chance += static_cast<unsigned long long>(marg_a[c]) * marg_b[c];
  }
  const double n = static_cast<double>(r.n);
  r.p_o = static_cast<double>(r.agreements) / n;
  r.p_e = static_cast<double>(chance) / (n * n);
  if (chance == static_cast<unsigned long long>(r.n) * r.n) {
    r.degenerate = true;
    r.kappa = r.agreements == r.n ? 1.0 : 0.0;
  } else {
    r.kappa = (r.p_o - r.p_e) / (1.0 - r.p_e);
  }
  return r;
}

std::string_view agreement_band(double kappa) {
  if (kappa < 0.0) return "poor";
  if (kappa <= 0.20) return "slight";
  if (kappa <= 0.40) return "fair";
  if (kappa <= 0.60) return "moderate";
  if (kappa <= 0.80) return "substantial";
  return "almost perfect";
}

CalibrationReport calibration_report(std::span<const CalibrationSource> sources) {
  if (sources.empty()) fail(ErrorCode::invalid_argument, "calibration report needs a source");
  CalibrationReport report;
  std::vector<std::string> all_a, all_b;
  for (const auto& s : sources) {
    report.rows.push_back({s.name, cohens_kappa(s.labels_a, s.labels_b)});
    all_a.insert(all_a.end(), s.labels_a.begin(), s.labels_a.end());
    all_b.insert(all_b.end(), s.labels_b.begin(), s.labels_b.end());
  }
  report.combined = {"Overall Combined", cohens_kappa(all_a, all_b)};
  return report;
}

std::string render_calibration_csv(const CalibrationReport& report) {
  std::ostringstream out;
  out << "Data Source,Agreement,Cohen's Kappa\n";
  auto row = [&](const CalibrationRow& r) {
    out << csv_cell(r.source) << ',' << r.report.agreements << '/' << r.report.n << ','
        << format_fixed(r.report.kappa, 3) << '\n';
  };
  for (const auto& r : report.rows) row(r);
  row(report.combined);
  return out.str();
}

json to_json(const AgreementReport& r) {
  return json{{"n", r.n},
              {"agreements", r.agreements},
              {"p_o", r.p_o},
              {"p_e", r.p_e},
              {"kappa", r.kappa},
              {"degenerate", r.degenerate},
              {"band", agreement_band(r.kappa)},
              {"labels", r.labels},
              {"confusion", r.confusion}};
}

json to_json(const CalibrationReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json j = to_json(r.report);
    j["source"] = r.source;
    rows.push_back(j);
  }
  json combined = to_json(report.combined.report);
  combined["source"] = report.combined.source;
  return json{{"rows", rows}, {"combined", combined}};
}

namespace {

std::vector<std::string> label_list(const json& j, std::string_view ctx) {
  if (!j.is_array()) fail(ErrorCode::parse, std::string(ctx) + ": labels must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) fail(ErrorCode::parse, std::string(ctx) + ": labels must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::vector<CalibrationSource> calibration_sources_from_json(const json& j) {
  std::vector<CalibrationSource> out;
  if (j.is_array()) {
    for (const auto& item : j) {
      const std::string name = require_string(item, "source", "calibration source");
      out.push_back({name, label_list(require_field(item, "a", name), name),
                     label_list(require_field(item, "b", name), name)});
    }
  } else if (j.is_object()) {
    for (const auto& [name, item] : j.items()) {
      out.push_back({name, label_list(require_field(item, "a", name), name),
                     label_list(require_field(item, "b", name), name)});
    }
  } else {
    fail(ErrorCode::parse, "calibration input must be an object or an array");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Survey
// ---------------------------------------------------------------------------

SurveyResponse survey_response_from_json(const json& j) {
  constexpr std::string_view ctx = "survey response";
  SurveyResponse r;
  r.snippet_id = require_string(j, "snippet_id", ctx);
  const std::string judgment = require_string(j, "judgment", ctx);
  if (judgment == "agree") r.judgment = Judgment::agree;
  else if (judgment == "unsure") r.judgment = Judgment::unsure;
  else if (judgment == "disagree") r.judgment = Judgment::disagree;
  else fail(ErrorCode::parse, "survey response: unknown judgment '" + judgment + "'");
  const std::int64_t u = require_int(j, "usefulness", ctx);
  if (u < 1 || u > 5) fail(ErrorCode::parse, "survey response: usefulness must be within 1..5");
  r.usefulness = static_cast<int>(u);
  r.respondent = require_string(j, "respondent", ctx);
  return r;
}

json to_json(const SurveyResponse& r) {
  constexpr std::array<std::string_view, 3> names = {"agree", "unsure", "disagree"};
  return json{{"snippet_id", r.snippet_id},
              {"judgment", names[static_cast<std::size_t>(r.judgment)]},
              {"usefulness", r.usefulness},
              {"respondent", r.respondent}};
}

SurveyAggregate survey_aggregate(std::span<const SurveyResponse> responses) {
  if (responses.empty()) fail(ErrorCode::invalid_argument, "survey aggregate needs responses");
  std::size_t agree = 0, unsure = 0, disagree = 0;
  long long likert = 0;
  for (const auto& r : responses) {
    if (r.usefulness < 1 || r.usefulness > 5) {
      fail(ErrorCode::invalid_argument, "usefulness must be within 1..5");
    }
    switch (r.judgment) {
      case Judgment::agree: ++agree; break;
      case Judgment::unsure: ++unsure; break;
      case Judgment::disagree: ++disagree; break;
    }
    likert += r.usefulness;
  }
  const double n = static_cast<double>(responses.size());
  SurveyAggregate a;
  a.responses = responses.size();
  a.agree_pct = 100.0 * static_cast<double>(agree) / n;
  a.unsure_pct = 100.0 * static_cast<double>(unsure) / n;
  a.disagree_pct = 100.0 * static_cast<double>(disagree) / n;
  a.mean_usefulness = static_cast<double>(likert) / n;
  return a;
}

json to_json(const SurveyAggregate& a) {
  return json{{"responses", a.responses},
              {"agree_pct", a.agree_pct},
              {"unsure_pct", a.unsure_pct},
              {"disagree_pct", a.disagree_pct},
              {"mean_usefulness", a.mean_usefulness}};
}

}  // namespace scidebt
