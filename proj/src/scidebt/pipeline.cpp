#include "scidebt/pipeline.hpp"

#include <algorithm>

#include "scidebt/agreement.hpp"
#include "scidebt/classifier.hpp"
#include "scidebt/dataset.hpp"
#include "scidebt/error.hpp"
#include "scidebt/evaluation.hpp"
#include "scidebt/heuristics.hpp"
#include "scidebt/ingest.hpp"
#include "scidebt/normalize.hpp"
#include "scidebt/reporting.hpp"

namespace fs = std::filesystem;

namespace scidebt {

namespace {

json kind_counts(const std::array<std::size_t, kArtifactKindCount>& counts) {
  json j = json::object();
  for (auto k : kAllKinds) j[std::string(to_string(k))] = counts[index_of(k)];
  return j;
}

fs::path resolve(const fs::path& base, const json& v) {
  fs::path p(v.get<std::string>());
  return p.is_relative() ? base / p : p;
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  return fs::path(p.string() + suffix);
}

bool wants_json(const fs::path& out) { return out.extension() == ".json"; }

void write_report(const fs::path& out, const std::string& csv, const json& j) {
  if (out.empty()) return;
  write_file(out, wants_json(out) ? j.dump(2) + "\n" : csv);
}

const fs::path& require_path(const fs::path& p, std::string_view what) {
  if (p.empty()) fail(ErrorCode::invalid_argument, "no " + std::string(what) + " path given or configured");
  return p;
}

std::vector<NormalizedInstance> load_instances(const fs::path& path) {
  std::vector<NormalizedInstance> out;
  for (const auto& row : read_jsonl(path)) out.push_back(normalized_instance_from_json(row));
  return out;
}

// Regular files below `root`, sorted for a stable corpus order.
std::vector<fs::path> source_files(const fs::path& root) {
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path().filename() == ".git") {
      it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file()) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

json run_extract(const Config& cfg, const fs::path& manifest, const fs::path& out) {
  const json m = parse_json(read_file(manifest), manifest.string());
  const fs::path base = manifest.parent_path();
  const json& repos = require_field(m, "repositories", "manifest");

  std::vector<RawArtifact> all;
  std::size_t skipped_commits = 0, bot_removed = 0, discarded_docs = 0;
  json kept = json::array(), rejected = json::array();
  for (const auto& entry : repos) {
    const RepoMeta meta = repo_meta_from_json(require_field(entry, "meta", "manifest repository"));
    if (!meets_criteria(meta, cfg.criteria)) {
      rejected.push_back(meta.name);
      continue;
    }
    kept.push_back(meta.name);
    const fs::path root = resolve(base, require_field(entry, "path", meta.name));

    for (const auto& file : source_files(root)) {
      const std::string rel = fs::relative(file, root).generic_string();
      const auto lang = cfg.syntax.language_for_path(rel);
      if (!lang) continue;
      auto found = extract_comments(read_file(file), *lang, cfg.syntax, meta.name, rel);
      all.insert(all.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
    }

    std::vector<CommitRecord> log;
    if (entry.contains("commit_log")) {
      for (const auto& row : read_jsonl(resolve(base, entry["commit_log"]))) {
        log.push_back(commit_record_from_json(row));
      }
    } else {
      log = read_git_log(root.string());
    }
    auto commits = extract_commit_messages(log, meta.name);
    skipped_commits += commits.skipped;
    all.insert(all.end(), commits.artifacts.begin(), commits.artifacts.end());

    if (entry.contains("issues")) {
      std::vector<RawArtifact> sections;
      for (const auto& file : source_files(resolve(base, entry["issues"]))) {
        if (file.extension() != ".json") continue;
        auto got = ingest_issue_or_pr(parse_json(read_file(file), file.string()), meta.name);
        if (got.empty()) ++discarded_docs;
        sections.insert(sections.end(), got.begin(), got.end());
      }
      auto humans = filter_bots(sections, cfg.bots);
      bot_removed += sections.size() - humans.size();
      all.insert(all.end(), humans.begin(), humans.end());
    }
  }

  std::stable_sort(all.begin(), all.end(), artifact_order_less);
  std::vector<json> rows;
  std::array<std::size_t, kArtifactKindCount> per_kind{};
  for (const auto& a : all) {
    rows.push_back(to_json(a));
    ++per_kind[index_of(a.kind)];
  }
  write_jsonl(out, rows);
  return json{{"repositories_kept", kept},
              {"repositories_rejected", rejected},
              {"artifacts", all.size()},
              {"per_kind", kind_counts(per_kind)},
              {"skipped_commits", skipped_commits},
              {"bot_sections_removed", bot_removed},
              {"discarded_documents", discarded_docs},
              {"out", out.string()}};
}

json run_normalize(const Config& cfg, const fs::path& raw, const fs::path& out, std::uint64_t seed) {
  std::vector<RawArtifact> artifacts;
  for (const auto& row : read_jsonl(raw)) artifacts.push_back(raw_artifact_from_json(row));
  std::stable_sort(artifacts.begin(), artifacts.end(), artifact_order_less);

  const CommentSyntax plain = CommentSyntax::empty();
  std::vector<NormalizedInstance> cleaned;
  std::array<std::size_t, kArtifactKindCount> empty{}, license{};
  for (const auto& a : artifacts) {
    const CommentSyntax& syntax = a.kind == ArtifactKind::code_comment && a.source_language
                                      ? cfg.syntax.require(*a.source_language)
                                      : plain;
    auto outcome = normalize_text(a, syntax, cfg.license_keywords);
    if (outcome.instance) {
      cleaned.push_back(std::move(*outcome.instance));
    } else if (outcome.reason == FilterReason::license) {
      ++license[index_of(a.kind)];
    } else {
      ++empty[index_of(a.kind)];
    }
  }
  const DedupResult dedup = dedupe(cleaned);

  std::vector<json> rows;
  std::array<std::size_t, kArtifactKindCount> per_kind{};
  std::array<std::vector<NormalizedInstance>, kArtifactKindCount> by_kind;
  for (const auto& inst : dedup.kept) {
    rows.push_back(to_json(inst));
    ++per_kind[index_of(inst.kind)];
    by_kind[index_of(inst.kind)].push_back(inst);
  }
  write_jsonl(out, rows);

  std::vector<json> sample_rows;
  for (auto k : kAllKinds) {
    const auto& pop = by_kind[index_of(k)];
    const std::size_t n = std::min(cfg.inspection_sample, pop.size());
    for (const auto& inst : draw_inspection_sample<NormalizedInstance>(pop, n, seed + index_of(k))) {
      sample_rows.push_back(to_json(inst));
    }
  }
  const fs::path sample_path = sibling(out, ".inspection.jsonl");
  write_jsonl(sample_path, sample_rows);

  return json{{"input", artifacts.size()},
              {"kept", dedup.kept.size()},
              {"per_kind", kind_counts(per_kind)},
              {"filtered_empty", kind_counts(empty)},
              {"filtered_license", kind_counts(license)},
              {"duplicates_dropped", kind_counts(dedup.report.dropped)},
              {"inspection_sample", sample_rows.size()},
              {"inspection_path", sample_path.string()},
              {"out", out.string()}};
}

json run_train(const Config& cfg, const fs::path& dataset, const fs::path& model_out,
               std::uint64_t seed, bool grid) {
  const Dataset ds = load_dataset(dataset);
  TrainOptions options = cfg.model;
  json summary = json::object();
  if (grid) {
    const auto result = grid_search(ds, kDefaultAlphaGrid, kDefaultLambdaGrid, cfg.folds, seed, options.single_head);
    options.alpha = result.best.alpha;
    options.lambda = result.best.lambda;
    summary["grid"] = to_json(result);
  }
  const NaiveBayesModel model = train(ds, options);
  model.save(model_out);
  json classes = json::array();
  for (auto c : model.classes()) classes.push_back(to_string(c));
  summary["alpha"] = model.alpha();
  summary["lambda"] = model.lambda();
  summary["single_head"] = model.single_head();
  summary["classes"] = classes;
  summary["vocabulary"] = model.vocabulary().size();
  summary["instances"] = ds.size();
  summary["model_hash"] = model.hash();
  summary["warnings"] = model.warnings();
  summary["out"] = model_out.string();
  return summary;
}

json run_classify(const Config& cfg, const fs::path& model_path, const fs::path& instances,
                  const fs::path& out, const fs::path& prevalence_out) {
  (void)cfg;
  const NaiveBayesModel model = NaiveBayesModel::load(model_path);
  const PrevalenceReport report = classify_corpus_file(model, instances, out);
  const fs::path prev = prevalence_out.empty() ? sibling(out, ".prevalence.json") : prevalence_out;
  write_file(prev, to_json(report).dump(2) + "\n");
  const fs::path csv = prev.extension() == ".json" ? fs::path(prev).replace_extension(".csv") : sibling(prev, ".csv");
  write_file(csv, render_prevalence_csv(report));
  return json{{"classified", report.total()},
              {"model_hash", model.hash()},
              {"prevalence", to_json(report)},
              {"prevalence_path", prev.string()},
              {"prevalence_csv", csv.string()},
              {"out", out.string()}};
}

json run_select(const Config& cfg, std::uint64_t seed, const fs::path& out) {
  const fs::path& state_path = require_path(cfg.paths.loop_state, "loop_state");
  DatasetWriter writer = open_dataset_writer(cfg);
  const auto unlabeled = load_instances(require_path(cfg.paths.unlabeled, "unlabeled"));
  LoopState state = load_loop_state(state_path);
  LoopConfig loop = cfg.loop;
  loop.seed = seed;
  const RoundOutput round = run_round(state, writer.snapshot(), unlabeled, loop, writer.hash());
  save_loop_state(state, state_path);

  json batches = json::array();
  for (const auto& b : round.batches) batches.push_back(to_json(b));
  const fs::path model_path = sibling(out, ".model");
  round.model.save(model_path);
  const json doc{{"round", state.round},
                 {"model_hash", state.model_hash},
                 {"dataset_ref", state.dataset_ref},
                 {"seed", seed},
                 {"batches", batches}};
  write_file(out, doc.dump(2) + "\n");

  json sizes = json::object();
  for (const auto& b : round.batches) sizes[b.batch_id] = b.items.size();
  return json{{"round", state.round},
              {"model_hash", state.model_hash},
              {"dataset_ref", state.dataset_ref},
              {"batch_sizes", sizes},
              {"model_path", model_path.string()},
              {"out", out.string()}};
}

json run_ingest_labels(const Config& cfg, const fs::path& labels_path, bool close) {
  const fs::path& state_path = require_path(cfg.paths.loop_state, "loop_state");
  DatasetWriter writer = open_dataset_writer(cfg);
  LoopState state = load_loop_state(state_path);

  const json doc = parse_json(read_file(labels_path), labels_path.string());
  std::vector<json> submissions;
  if (doc.is_array()) {
    submissions.assign(doc.begin(), doc.end());
  } else {
    submissions.push_back(doc);
  }
  std::size_t accepted = 0, skipped = 0;
  for (const auto& s : submissions) {
    const std::string batch_id = require_string(s, "batch_id", "labels file");
    std::vector<LabelSubmission> labels;
    for (const auto& row : require_field(s, "labels", batch_id)) labels.push_back(label_submission_from_json(row));
    const auto result = submit_labels(state, writer, batch_id, labels, s.value("close_batch", false));
    accepted += result.delta.size();
    skipped += result.skipped.size();
    save_loop_state(state, state_path);
  }
  json summary{{"accepted", accepted}, {"skipped", skipped}, {"dataset_size", writer.snapshot().size()}};
  if (close) {
    const RoundRecord rec = close_round(state, writer);
    save_loop_state(state, state_path);
    if (!cfg.paths.rounds_log.empty()) {
      const json row = to_json(rec);
      append_jsonl(cfg.paths.rounds_log, std::span<const json>(&row, 1));
    }
    summary["closed"] = to_json(rec);
  }
  summary["round"] = state.round;
  return summary;
}

json run_kappa(const fs::path& calibration, const fs::path& out) {
  const auto sources = calibration_sources_from_json(parse_json(read_file(calibration), calibration.string()));
  const CalibrationReport report = calibration_report(sources);
  write_report(out, render_calibration_csv(report), to_json(report));
  return to_json(report);
}

json run_report(const Config& cfg, const std::string& kind, const fs::path& input, const fs::path& out,
                std::uint64_t seed) {
  auto in_or = [&](const fs::path& configured, std::string_view what) -> fs::path {
    return input.empty() ? require_path(configured, what) : input;
  };
  if (kind == "distribution") {
    const auto table = distribution(load_dataset(in_or(cfg.paths.dataset, "dataset")));
    write_report(out, render_distribution_csv(table), to_json(table));
    return to_json(table);
  }
  if (kind == "exclusion") {
    const auto r = exclusion_experiment(load_dataset(in_or(cfg.paths.dataset, "dataset")), cfg.model.alpha,
                                        cfg.model.lambda);
    write_report(out, render_exclusion_csv(r), to_json(r));
    return to_json(r);
  }
  if (kind == "cv") {
    const auto r = cross_validate(load_dataset(in_or(cfg.paths.dataset, "dataset")), cfg.folds, seed, cfg.model);
    write_report(out, render_cross_validation_csv(r), to_json(r));
    return to_json(r);
  }
  if (kind == "grid") {
    const auto r = grid_search(load_dataset(in_or(cfg.paths.dataset, "dataset")), kDefaultAlphaGrid,
                               kDefaultLambdaGrid, cfg.folds, seed, cfg.model.single_head);
    write_report(out, render_grid_csv(r), to_json(r));
    return to_json(r);
  }
  if (kind == "heads") {
    const auto r = compare_heads(load_dataset(in_or(cfg.paths.dataset, "dataset")), cfg.folds, seed,
                                 cfg.model.alpha, cfg.model.lambda);
    const json j{{"multi_head", to_json(r.multi_head)},
                 {"single_head", to_json(r.single_head)},
                 {"macro_f1_delta", r.multi_head.macro_f1.mean - r.single_head.macro_f1.mean}};
    const std::string csv = "Configuration,Mean Macro-F1,Mean Accuracy\nmulti-head," +
                            format_fixed(r.multi_head.macro_f1.mean, 4) + "," +
                            format_fixed(r.multi_head.accuracy.mean, 4) + "\nsingle-head," +
                            format_fixed(r.single_head.macro_f1.mean, 4) + "," +
                            format_fixed(r.single_head.accuracy.mean, 4) + "\n";
    write_report(out, csv, j);
    return j;
  }
  if (kind == "prevalence") {
    const auto r = recount_predictions(in_or(cfg.paths.predictions, "predictions"));
    write_report(out, render_prevalence_csv(r), to_json(r));
    return to_json(r);
  }
  if (kind == "survey") {
    std::vector<SurveyResponse> responses;
    for (const auto& row : read_jsonl(in_or(cfg.paths.survey, "survey"))) {
      responses.push_back(survey_response_from_json(row));
    }
    const auto agg = survey_aggregate(responses);
    const std::string csv = "Responses,Agree %,Unsure %,Disagree %,Mean Usefulness\n" +
                            std::to_string(agg.responses) + "," + format_fixed(agg.agree_pct, 1) + "," +
                            format_fixed(agg.unsure_pct, 1) + "," + format_fixed(agg.disagree_pct, 1) + "," +
                            format_fixed(agg.mean_usefulness, 2) + "\n";
    write_report(out, csv, to_json(agg));
    return to_json(agg);
  }
  if (kind == "keywords") {
    const auto hits = keyword_scan(load_instances(in_or(cfg.paths.unlabeled, "unlabeled")), cfg.keywords);
    json j = json::array();
    for (const auto& h : hits) {
      json groups = json::array();
      for (auto g : h.matched_groups) groups.push_back(to_string(g));
      j.push_back(json{{"instance_id", h.instance_id}, {"phrases", h.matched_phrases}, {"groups", groups}});
    }
    write_report(out, render_hits_csv(hits), j);
    return json{{"hits", hits.size()}, {"out", out.string()}};
  }
  if (kind == "sample-size") {
    const json j{{"confidence", 0.95}, {"margin", 0.05}, {"raw", sample_size_raw(0.95, 0.05)},
                 {"n", sample_size(0.95, 0.05)}};
    write_report(out, "Confidence,Margin,Sample Size\n0.95,0.05," + std::to_string(sample_size(0.95, 0.05)) + "\n", j);
    return j;
  }
  fail(ErrorCode::invalid_argument, "unknown report kind '" + kind + "'");
}

}  // namespace scidebt
