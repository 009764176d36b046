#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "scidebt/config.hpp"

namespace scidebt {

// Command-level drivers shared by the C API and the CLI. Each returns a JSON
// summary of what it wrote.

// Manifest: {"repositories": [{"meta": RepoMeta, "path": dir, "commit_log"?: jsonl,
// "issues"?: dir}]}; relative paths resolve against the manifest's directory.
// Without "commit_log" a git clone is read with `git log`.
json run_extract(const Config& cfg, const std::filesystem::path& manifest,
                 const std::filesystem::path& out);

// Raw JSONL -> normalized JSONL, plus <out>.inspection.jsonl holding up to
// cfg.inspection_sample instances per kind.
json run_normalize(const Config& cfg, const std::filesystem::path& raw,
                   const std::filesystem::path& out, std::uint64_t seed);

// With `grid`, alpha/lambda come from a stratified grid search.
json run_train(const Config& cfg, const std::filesystem::path& dataset,
               const std::filesystem::path& model_out, std::uint64_t seed, bool grid);

// Predictions JSONL at `out`; prevalence JSON and CSV next to it unless
// `prevalence_out` is given.
json run_classify(const Config& cfg, const std::filesystem::path& model,
                  const std::filesystem::path& instances, const std::filesystem::path& out,
                  const std::filesystem::path& prevalence_out = {});

// Opens a round from paths.dataset / paths.unlabeled / paths.loop_state and
// exports its batches to `out` (the model goes to <out>.model).
json run_select(const Config& cfg, std::uint64_t seed, const std::filesystem::path& out);

// Labels file: {"batch_id", "labels": [...]} or a list of such objects.
// With `close`, the round is closed afterwards and logged.
json run_ingest_labels(const Config& cfg, const std::filesystem::path& labels, bool close);

json run_kappa(const std::filesystem::path& calibration, const std::filesystem::path& out);

// kind: distribution | exclusion | cv | grid | heads | prevalence | survey |
// keywords | sample-size. `input` defaults to the matching configured path.
// `out` ending in .json gets JSON, anything else CSV.
json run_report(const Config& cfg, const std::string& kind, const std::filesystem::path& input,
                const std::filesystem::path& out, std::uint64_t seed);

}  // namespace scidebt
