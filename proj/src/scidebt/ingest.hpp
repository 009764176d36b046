#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "scidebt/error.hpp"
#include "scidebt/types.hpp"
#include "scidebt/util.hpp"

namespace scidebt {

// ---------------------------------------------------------------------------
// Repository selection
// ---------------------------------------------------------------------------

struct RepoMeta {
  std::string name;
  std::uint64_t commit_count = 0;
  std::uint64_t contributor_count = 0;
  std::uint64_t age_days = 0;
  std::uint64_t star_count = 0;
  std::uint64_t days_since_last_commit = 0;
  bool is_public = false;
};

struct SelectionCriteria {
  bool require_public = true;
  std::uint64_t max_days_since_last_commit = 120;  // "contributed to in the last four months"
  std::uint64_t min_commits = 10'000;
  std::uint64_t min_contributors = 20;
  std::uint64_t min_age_days = 730;
  std::uint64_t min_stars = 40;
};

bool meets_criteria(const RepoMeta& repo, const SelectionCriteria& criteria);

// Keeps exactly the candidates satisfying every threshold, in input order.
std::vector<RepoMeta> filter_repositories(std::span<const RepoMeta> candidates,
                                          const SelectionCriteria& criteria);

RepoMeta repo_meta_from_json(const json& j);
json to_json(const RepoMeta& repo);

// ---------------------------------------------------------------------------
// Comment syntax profiles
// ---------------------------------------------------------------------------

struct BlockDelimiter {
  std::string open;
  std::string close;
};

// Lexical description of one language's comments. Extraction never parses
// beyond this profile plus a quote tracker.
struct CommentSyntax {
  std::string language;
  std::vector<std::string> line_prefixes;
  std::vector<BlockDelimiter> blocks;
  // Leading marker stripped from continuation lines inside block comments.
  std::string block_continuation;
  // Characters that open/close string literals; delimiters inside are ignored.
  std::string string_quotes = "\"'";
  // A first line starting with "#!" is an interpreter line, not a comment.
  bool skip_shebang = false;
  std::vector<std::string> extensions;  // lowercase, with leading dot
  std::vector<std::string> filenames;   // exact basenames, e.g. CMakeLists.txt

  static CommentSyntax empty() { return CommentSyntax{.string_quotes = ""}; }
};

class SyntaxRegistry {
 public:
  // The eight corpus languages: python, cpp, fortran, java, shell, cmake,
  // matlab, rouge. The rouge profile ships without delimiters; it must be
  // configured before it extracts anything.
  static SyntaxRegistry defaults();

  void add(CommentSyntax syntax);  // replaces a profile with the same language
  const CommentSyntax* find(std::string_view language) const;
  // Throws Error(unsupported) for unknown languages.
  const CommentSyntax& require(std::string_view language) const;
  std::optional<std::string> language_for_path(std::string_view path) const;
  std::vector<std::string> languages() const;

 private:
  std::vector<CommentSyntax> profiles_;
};

CommentSyntax comment_syntax_from_json(const json& j);
json to_json(const CommentSyntax& syntax);

// ---------------------------------------------------------------------------
// Raw artifacts
// ---------------------------------------------------------------------------

struct FileSpan {
  std::string path;
  std::size_t line_start = 0;  // 1-based, inclusive
  std::size_t line_end = 0;
  std::size_t column = 0;      // 1-based column of the opening delimiter
  friend auto operator<=>(const FileSpan&, const FileSpan&) = default;
};

struct CommitRef {
  std::string hash;
  friend auto operator<=>(const CommitRef&, const CommitRef&) = default;
};

struct SectionRef {
  std::int64_t number = 0;
  SectionRole role = SectionRole::title;
  std::size_t index = 0;
  friend auto operator<=>(const SectionRef&, const SectionRef&) = default;
};

using Locator = std::variant<FileSpan, CommitRef, SectionRef>;

std::string locator_string(ArtifactKind kind, const Locator& locator);

struct RawArtifact {
  std::string id;
  std::string project;
  ArtifactKind kind = ArtifactKind::code_comment;
  Locator locator;
  std::string author;
  bool author_is_bot = false;
  std::optional<std::string> timestamp;
  std::optional<std::string> source_language;
  std::string body;
};

std::string make_artifact_id(std::string_view project, ArtifactKind kind, const Locator& locator);

json to_json(const RawArtifact& artifact);
RawArtifact raw_artifact_from_json(const json& j);

// Deterministic corpus order: project, then locator (kind order first).
bool artifact_order_less(const RawArtifact& a, const RawArtifact& b);

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

// Consecutive full-line comments merge into one artifact; a trailing comment
// after code is its own artifact; a block comment is one artifact.
std::vector<RawArtifact> extract_comments(std::string_view file_text, std::string_view language,
                                          const SyntaxRegistry& registry,
                                          std::string_view project = {},
                                          std::string_view path = {});

struct CommitRecord {
  std::string hash;
  std::string author;
  std::string timestamp;
  std::string message;
};

CommitRecord commit_record_from_json(const json& j);

struct CommitExtraction {
  std::vector<RawArtifact> artifacts;
  std::size_t skipped = 0;  // records with an empty message
};

CommitExtraction extract_commit_messages(std::span<const CommitRecord> log,
                                         std::string_view project = {});

// Commit log of a local clone via `git log`; empty when git is unavailable.
std::vector<CommitRecord> read_git_log(const std::string& clone_path);

// One archived issue/PR document -> one artifact per non-empty section.
// Throws Error(parse) naming the offending field for malformed records.
std::vector<RawArtifact> ingest_issue_or_pr(const json& record, std::string_view project = {});

// Case-insensitive exact match of author names against the bot list.
std::vector<RawArtifact> filter_bots(std::span<const RawArtifact> artifacts,
                                     std::span<const std::string> bot_names);

// Uniform sample without replacement; identical for identical seeds.
template <typename T>
std::vector<T> draw_inspection_sample(std::span<const T> population, std::size_t n,
                                      std::uint64_t seed) {
  if (n > population.size()) {
    fail(ErrorCode::invalid_argument, "inspection sample of " + std::to_string(n) +
                                          " requested from a population of " +
                                          std::to_string(population.size()));
  }
  std::vector<std::size_t> order(population.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
  }
  std::vector<T> sample;
  sample.reserve(n);
  for (std::size_t i = 0; i < n; ++i) sample.push_back(population[order[i]]);
  return sample;
}

inline constexpr std::size_t kDefaultInspectionSample = 100;

}  // namespace scidebt
