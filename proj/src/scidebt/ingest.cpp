#include "scidebt/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>

namespace scidebt {

// ---------------------------------------------------------------------------
// Repository selection
// ---------------------------------------------------------------------------

bool meets_criteria(const RepoMeta& r, const SelectionCriteria& c) {
  if (c.require_public && !r.is_public) return false;
  return r.days_since_last_commit <= c.max_days_since_last_commit &&
         r.commit_count >= c.min_commits && r.contributor_count >= c.min_contributors &&
         r.age_days >= c.min_age_days && r.star_count >= c.min_stars;
}

std::vector<RepoMeta> filter_repositories(std::span<const RepoMeta> candidates,
                                          const SelectionCriteria& criteria) {
  std::vector<RepoMeta> kept;
  std::copy_if(candidates.begin(), candidates.end(), std::back_inserter(kept),
               [&](const RepoMeta& r) { return meets_criteria(r, criteria); });
  return kept;
}

namespace {

std::uint64_t require_count(const json& j, std::string_view field, std::string_view ctx) {
  const std::int64_t v = require_int(j, field, ctx);
  if (v < 0) {
    fail(ErrorCode::parse, std::string(ctx) + ": field '" + std::string(field) + "' is negative");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

RepoMeta repo_meta_from_json(const json& j) {
  constexpr std::string_view ctx = "repository metadata";
  RepoMeta r;
  r.name = require_string(j, "name", ctx);
  r.commit_count = require_count(j, "commit_count", ctx);
  r.contributor_count = require_count(j, "contributor_count", ctx);
  r.age_days = require_count(j, "age_days", ctx);
  r.star_count = require_count(j, "star_count", ctx);
  r.days_since_last_commit = require_count(j, "days_since_last_commit", ctx);
  const json& pub = require_field(j, "is_public", ctx);
  if (!pub.is_boolean()) fail(ErrorCode::parse, "repository metadata: 'is_public' must be a boolean");
  r.is_public = pub.get<bool>();
  return r;
}

json to_json(const RepoMeta& r) {
  return json{{"name", r.name},
              {"commit_count", r.commit_count},
              {"contributor_count", r.contributor_count},
              {"age_days", r.age_days},
              {"star_count", r.star_count},
              {"days_since_last_commit", r.days_since_last_commit},
              {"is_public", r.is_public}};
}

// ---------------------------------------------------------------------------
// Comment syntax profiles
// ---------------------------------------------------------------------------

SyntaxRegistry SyntaxRegistry::defaults() {
  SyntaxRegistry reg;
  reg.add({.language = "python",
           .line_prefixes = {"#"},
           .skip_shebang = true,
           .extensions = {".py", ".pyx", ".pxd"}});
  reg.add({.language = "cpp",
           .line_prefixes = {"//"},
           .blocks = {{"/*", "*/"}},
           .block_continuation = "*",
           .extensions = {".c", ".h", ".cc", ".cpp", ".cxx", ".hpp", ".hh", ".hxx", ".cu",
                          ".cuh", ".inl"}});
  reg.add({.language = "fortran",
           .line_prefixes = {"!"},
           .extensions = {".f", ".for", ".f77", ".f90", ".f95", ".f03", ".f08"}});
  reg.add({.language = "java",
           .line_prefixes = {"//"},
           .blocks = {{"/*", "*/"}},
           .block_continuation = "*",
           .extensions = {".java"}});
  reg.add({.language = "shell",
           .line_prefixes = {"#"},
           .skip_shebang = true,
           .extensions = {".sh", ".bash", ".zsh", ".ksh"}});
  reg.add({.language = "cmake",
           .line_prefixes = {"#"},
           .blocks = {{"#[[", "]]"}},
           .extensions = {".cmake"},
           .filenames = {"CMakeLists.txt"}});
  reg.add({.language = "matlab",
           .line_prefixes = {"%"},
           .blocks = {{"%{", "%}"}},
           .extensions = {".m"}});
  reg.add({.language = "rouge", .string_quotes = ""});
  return reg;
}

void SyntaxRegistry::add(CommentSyntax syntax) {
  auto it = std::find_if(profiles_.begin(), profiles_.end(),
                         [&](const CommentSyntax& p) { return p.language == syntax.language; });
  if (it != profiles_.end()) {
    *it = std::move(syntax);
  } else {
    profiles_.push_back(std::move(syntax));
  }
}

const CommentSyntax* SyntaxRegistry::find(std::string_view language) const {
  for (const auto& p : profiles_) {
    if (p.language == language) return &p;
  }
  return nullptr;
}

const CommentSyntax& SyntaxRegistry::require(std::string_view language) const {
  if (const CommentSyntax* p = find(language)) return *p;
  fail(ErrorCode::unsupported,
       "unsupported comment syntax: no profile registered for '" + std::string(language) + "'");
}

std::optional<std::string> SyntaxRegistry::language_for_path(std::string_view path) const {
  const std::filesystem::path p(path);
  const std::string base = p.filename().string();
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& prof : profiles_) {
    if (std::find(prof.filenames.begin(), prof.filenames.end(), base) != prof.filenames.end()) {
      return prof.language;
    }
  }
  if (ext.empty()) return std::nullopt;
  for (const auto& prof : profiles_) {
    if (std::find(prof.extensions.begin(), prof.extensions.end(), ext) != prof.extensions.end()) {
      return prof.language;
    }
  }
  return std::nullopt;
}

std::vector<std::string> SyntaxRegistry::languages() const {
  std::vector<std::string> out;
  for (const auto& p : profiles_) out.push_back(p.language);
  return out;
}

namespace {

std::vector<std::string> string_list(const json& j, std::string_view field) {
  std::vector<std::string> out;
  auto it = j.find(field);
  if (it == j.end()) return out;
  if (!it->is_array()) {
    fail(ErrorCode::parse, "comment syntax: '" + std::string(field) + "' must be an array");
  }
  for (const auto& v : *it) {
    if (!v.is_string() || v.get<std::string>().empty()) {
      fail(ErrorCode::parse,
           "comment syntax: '" + std::string(field) + "' entries must be non-empty strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

CommentSyntax comment_syntax_from_json(const json& j) {
  constexpr std::string_view ctx = "comment syntax";
  CommentSyntax s;
  s.language = require_string(j, "language", ctx);
  if (s.language.empty()) fail(ErrorCode::parse, "comment syntax: empty language tag");
  s.line_prefixes = string_list(j, "line_prefixes");
  if (auto it = j.find("blocks"); it != j.end()) {
    if (!it->is_array()) fail(ErrorCode::parse, "comment syntax: 'blocks' must be an array");
    for (const auto& b : *it) {
      BlockDelimiter d{require_string(b, "open", ctx), require_string(b, "close", ctx)};
      if (d.open.empty() || d.close.empty()) {
        fail(ErrorCode::parse, "comment syntax: block delimiters must be non-empty");
      }
      s.blocks.push_back(std::move(d));
    }
  }
  s.block_continuation = optional_string(j, "block_continuation", ctx);
  if (j.contains("string_quotes")) s.string_quotes = optional_string(j, "string_quotes", ctx);
  if (auto it = j.find("skip_shebang"); it != j.end()) s.skip_shebang = it->get<bool>();
  s.extensions = string_list(j, "extensions");
  s.filenames = string_list(j, "filenames");
  return s;
}

json to_json(const CommentSyntax& s) {
  json blocks = json::array();
  for (const auto& b : s.blocks) blocks.push_back({{"open", b.open}, {"close", b.close}});
  return json{{"language", s.language},           {"line_prefixes", s.line_prefixes},
              {"blocks", blocks},                 {"block_continuation", s.block_continuation},
              {"string_quotes", s.string_quotes}, {"skip_shebang", s.skip_shebang},
              {"extensions", s.extensions},       {"filenames", s.filenames}};
}

// ---------------------------------------------------------------------------
// Raw artifacts
// ---------------------------------------------------------------------------

std::string locator_string(ArtifactKind kind, const Locator& locator) {
  return std::visit(
      [&](const auto& loc) -> std::string {
        using T = std::decay_t<decltype(loc)>;
        if constexpr (std::is_same_v<T, FileSpan>) {
          return loc.path + ":" + std::to_string(loc.line_start) + "-" +
                 std::to_string(loc.line_end) + ":" + std::to_string(loc.column);
        } else if constexpr (std::is_same_v<T, CommitRef>) {
          return "commit:" + loc.hash;
        } else {
          const char* prefix = kind == ArtifactKind::pull_request_section ? "pr#" : "issue#";
          return prefix + std::to_string(loc.number) + "/" + std::string(to_string(loc.role)) +
                 "/" + std::to_string(loc.index);
        }
      },
      locator);
}

std::string make_artifact_id(std::string_view project, ArtifactKind kind, const Locator& locator) {
  std::string id(project);
  if (!id.empty()) id += '/';
  id += locator_string(kind, locator);
  return id;
}

json to_json(const RawArtifact& a) {
  json loc = std::visit(
      [](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, FileSpan>) {
          return {{"path", l.path},
                  {"line_start", l.line_start},
                  {"line_end", l.line_end},
                  {"column", l.column}};
        } else if constexpr (std::is_same_v<T, CommitRef>) {
          return {{"commit", l.hash}};
        } else {
          return {{"number", l.number}, {"role", to_string(l.role)}, {"index", l.index}};
        }
      },
      a.locator);
  json j{{"id", a.id},
         {"project", a.project},
         {"kind", to_string(a.kind)},
         {"locator", loc},
         {"author", a.author},
         {"author_is_bot", a.author_is_bot},
         {"body", a.body}};
  j["timestamp"] = a.timestamp ? json(*a.timestamp) : json(nullptr);
  j["source_language"] = a.source_language ? json(*a.source_language) : json(nullptr);
  return j;
}

RawArtifact raw_artifact_from_json(const json& j) {
  constexpr std::string_view ctx = "raw artifact";
  RawArtifact a;
  a.id = require_string(j, "id", ctx);
  a.project = optional_string(j, "project", ctx);
  a.kind = parse_kind(require_string(j, "kind", ctx));
  const json& loc = require_field(j, "locator", ctx);
  switch (a.kind) {
    case ArtifactKind::code_comment:
      a.locator = FileSpan{require_string(loc, "path", ctx),
                           static_cast<std::size_t>(require_int(loc, "line_start", ctx)),
                           static_cast<std::size_t>(require_int(loc, "line_end", ctx)),
                           static_cast<std::size_t>(loc.value("column", 1))};
      break;
    case ArtifactKind::commit_message:
      a.locator = CommitRef{require_string(loc, "commit", ctx)};
      break;
    default:
      a.locator = SectionRef{require_int(loc, "number", ctx),
                             parse_role(require_string(loc, "role", ctx)),
                             static_cast<std::size_t>(require_int(loc, "index", ctx))};
  }
  a.author = optional_string(j, "author", ctx);
  a.author_is_bot = j.value("author_is_bot", false);
  if (auto ts = optional_string(j, "timestamp", ctx); !ts.empty()) a.timestamp = ts;
  if (auto lang = optional_string(j, "source_language", ctx); !lang.empty()) {
    a.source_language = lang;
  }
  a.body = require_string(j, "body", ctx);
  return a;
}

bool artifact_order_less(const RawArtifact& a, const RawArtifact& b) {
  if (a.project != b.project) return a.project < b.project;
  if (a.locator.index() != b.locator.index()) return a.locator.index() < b.locator.index();
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.locator != b.locator) return a.locator < b.locator;
  return a.id < b.id;
}

// ---------------------------------------------------------------------------
// Comment extraction
// ---------------------------------------------------------------------------

namespace {

struct PendingComment {
  std::size_t line_start;
  std::size_t line_end;
  std::size_t column;
  std::string body;
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

enum class DelimKind { none, line, block };

struct DelimMatch {
  DelimKind kind = DelimKind::none;
  std::size_t length = 0;
  std::size_t block_index = 0;
};

// Longest delimiter starting at `pos`, so "#[[" wins over "#".
DelimMatch match_delimiter(const CommentSyntax& syn, std::string_view line, std::size_t pos) {
  DelimMatch best;
  const std::string_view rest = line.substr(pos);
  for (std::size_t b = 0; b < syn.blocks.size(); ++b) {
    const auto& open = syn.blocks[b].open;
    if (rest.starts_with(open) && open.size() > best.length) {
      best = {DelimKind::block, open.size(), b};
    }
  }
  for (const auto& prefix : syn.line_prefixes) {
    if (rest.starts_with(prefix) && prefix.size() > best.length) {
      best = {DelimKind::line, prefix.size(), 0};
    }
  }
  return best;
}

}  // namespace

std::vector<RawArtifact> extract_comments(std::string_view file_text, std::string_view language,
                                          const SyntaxRegistry& registry,
                                          std::string_view project, std::string_view path) {
  const CommentSyntax& syn = registry.require(language);
  const auto lines = split_lines(file_text);

  std::vector<PendingComment> found;
  std::optional<PendingComment> run;    // consecutive full-line comments
  std::optional<PendingComment> block;  // open block comment
  std::string block_close;

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view line = lines[li];
    const std::size_t lineno = li + 1;
    bool full_line = false;
    bool code_seen = false;
    char quote = 0;

    if (li == 0 && syn.skip_shebang && line.starts_with("#!")) continue;

    std::size_t i = 0;
    while (i < line.size()) {
      if (block) {
        const std::size_t close = line.find(block_close, i);
        if (close == std::string_view::npos) {
          block->body.append(line.substr(i));
          block->body += '\n';
          i = line.size();
          break;
        }
        const std::size_t end = close + block_close.size();
        block->body.append(line.substr(i, end - i));
        block->line_end = lineno;
        found.push_back(std::move(*block));
        block.reset();
        i = end;
        continue;
      }
      if (quote != 0) {
        if (line[i] == '\\') {
          i += 2;
        } else {
          if (line[i] == quote) quote = 0;
          ++i;
        }
        continue;
      }
      const DelimMatch m = match_delimiter(syn, line, i);
      if (m.kind == DelimKind::block) {
        block = PendingComment{lineno, lineno, i + 1, std::string(line.substr(i, m.length))};
        block_close = syn.blocks[m.block_index].close;
        i += m.length;
        continue;
      }
      if (m.kind == DelimKind::line) {
        std::string text(line.substr(i));
        if (code_seen) {
          found.push_back({lineno, lineno, i + 1, std::move(text)});
        } else {
          full_line = true;
          if (run && run->line_end + 1 == lineno) {
            run->body += '\n';
            run->body += text;
            run->line_end = lineno;
          } else {
            if (run) found.push_back(std::move(*run));
            run = PendingComment{lineno, lineno, i + 1, std::move(text)};
          }
        }
        break;
      }
      const char c = line[i];
      if (syn.string_quotes.find(c) != std::string::npos) {
        quote = c;
        code_seen = true;
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        code_seen = true;
      }
      ++i;
    }
    if (block && line.empty()) block->body += '\n';
    if (!full_line && run) {
      found.push_back(std::move(*run));
      run.reset();
    }
  }
  if (run) found.push_back(std::move(*run));
  if (block) {
    while (!block->body.empty() && block->body.back() == '\n') block->body.pop_back();
    block->line_end = std::max<std::size_t>(block->line_start, lines.size());
    found.push_back(std::move(*block));
  }

  std::sort(found.begin(), found.end(), [](const PendingComment& a, const PendingComment& b) {
    return std::tie(a.line_start, a.column) < std::tie(b.line_start, b.column);
  });

  std::vector<RawArtifact> out;
  out.reserve(found.size());
  for (auto& f : found) {
    RawArtifact a;
    a.project = std::string(project);
    a.kind = ArtifactKind::code_comment;
    a.locator = FileSpan{std::string(path), f.line_start, f.line_end, f.column};
    a.id = make_artifact_id(project, a.kind, a.locator);
    a.source_language = std::string(language);
    a.body = std::move(f.body);
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commits
// ---------------------------------------------------------------------------

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

CommitRecord commit_record_from_json(const json& j) {
  constexpr std::string_view ctx = "commit record";
  CommitRecord r;
  r.hash = require_string(j, "hash", ctx);
  r.author = optional_string(j, "author", ctx);
  r.timestamp = optional_string(j, "timestamp", ctx);
  if (j.contains("message")) {
    r.message = optional_string(j, "message", ctx);
  } else {
    const std::string subject = optional_string(j, "subject", ctx);
    const std::string body = optional_string(j, "body", ctx);
    r.message = body.empty() ? subject : subject + "\n" + body;
  }
  return r;
}

CommitExtraction extract_commit_messages(std::span<const CommitRecord> log,
                                         std::string_view project) {
  CommitExtraction out;
  for (const auto& rec : log) {
    if (rec.hash.empty()) fail(ErrorCode::invalid_argument, "commit record with an empty hash");
    if (is_blank(rec.message)) {
      ++out.skipped;
      continue;
    }
    RawArtifact a;
    a.project = std::string(project);
    a.kind = ArtifactKind::commit_message;
    a.locator = CommitRef{rec.hash};
    a.id = make_artifact_id(project, a.kind, a.locator);
    a.author = rec.author;
    if (!rec.timestamp.empty()) a.timestamp = rec.timestamp;
    a.body = trim(rec.message);
    out.artifacts.push_back(std::move(a));
  }
  return out;
}

std::vector<CommitRecord> read_git_log(const std::string& clone_path) {
  const std::string cmd = "git -C '" + clone_path +
                          "' log --format=%H%x1f%an%x1f%aI%x1f%B%x1e 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  std::string raw;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) raw.append(buf.data(), n);
  ::pclose(pipe);

  std::vector<CommitRecord> out;
  std::size_t start = 0;
  while (start < raw.size()) {
    std::size_t end = raw.find('\x1e', start);
    if (end == std::string::npos) end = raw.size();
    std::string_view rec(raw.data() + start, end - start);
    while (!rec.empty() && (rec.front() == '\n' || rec.front() == '\r')) rec.remove_prefix(1);
    std::array<std::string, 4> fields;
    std::size_t f = 0, pos = 0;
    while (f < 3) {
      const std::size_t sep = rec.find('\x1f', pos);
      if (sep == std::string_view::npos) break;
      fields[f++] = std::string(rec.substr(pos, sep - pos));
      pos = sep + 1;
    }
    if (f == 3 && !fields[0].empty()) {
      fields[3] = std::string(rec.substr(pos));
      out.push_back({fields[0], fields[1], fields[2], fields[3]});
    }
    start = end + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Issues and pull requests
// ---------------------------------------------------------------------------

std::vector<RawArtifact> ingest_issue_or_pr(const json& record, std::string_view project) {
  constexpr std::string_view ctx = "issue/PR record";
  if (!record.is_object()) fail(ErrorCode::parse, "issue/PR record: expected a JSON object");
  const std::int64_t number = require_int(record, "number", ctx);
  const std::string title = require_string(record, "title", ctx);
  const std::string body = optional_string(record, "body", ctx);
  const std::string created = optional_string(record, "created_at", ctx);
  const std::string doc_author = optional_string(record, "author", ctx);
  bool is_pr = false;
  if (auto it = record.find("is_pull_request"); it != record.end() && !it->is_null()) {
    if (!it->is_boolean()) fail(ErrorCode::parse, "issue/PR record: field 'is_pull_request' must be a boolean");
    is_pr = it->get<bool>();
  }
  const ArtifactKind kind = is_pr ? ArtifactKind::pull_request_section : ArtifactKind::issue_section;

  std::vector<RawArtifact> out;
  auto emit = [&](SectionRole role, std::size_t index, const std::string& text,
                  const std::string& author, const std::string& ts) {
    if (is_blank(text)) return;
    RawArtifact a;
    a.project = std::string(project);
    a.kind = kind;
    a.locator = SectionRef{number, role, index};
    a.id = make_artifact_id(project, kind, a.locator);
    a.author = author;
    if (!ts.empty()) a.timestamp = ts;
    a.body = trim(text);
    out.push_back(std::move(a));
  };

  emit(SectionRole::title, 0, title, doc_author, created);
  emit(SectionRole::description, 0, body, doc_author, created);

  if (auto it = record.find("comments"); it != record.end() && !it->is_null()) {
    if (!it->is_array()) fail(ErrorCode::parse, "issue/PR record: field 'comments' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& c = (*it)[i];
      const std::string cctx = "issue/PR record: comments[" + std::to_string(i) + "]";
      const std::string author = require_string(c, "author", cctx);
      const std::string cbody = optional_string(c, "body", cctx);
      const std::string cts = optional_string(c, "created_at", cctx);
      emit(SectionRole::comment, i, cbody, author, cts);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bots
// ---------------------------------------------------------------------------

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::vector<RawArtifact> filter_bots(std::span<const RawArtifact> artifacts,
                                     std::span<const std::string> bot_names) {
  std::vector<std::string> bots;
  bots.reserve(bot_names.size());
  for (const auto& b : bot_names) bots.push_back(lowercase(b));
  std::sort(bots.begin(), bots.end());

  std::vector<RawArtifact> kept;
  for (const auto& a : artifacts) {
    if (!bots.empty() && std::binary_search(bots.begin(), bots.end(), lowercase(a.author))) {
      continue;
    }
    kept.push_back(a);
  }
  return kept;
}

}  // namespace scidebt
