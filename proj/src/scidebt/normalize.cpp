#include "scidebt/normalize.hpp"

#include <algorithm>
#include <unordered_set>

#include "scidebt/error.hpp"

namespace scidebt {

NormalizedInstance make_instance(std::string id, ArtifactKind kind, std::string text,
                                 std::string provenance) {
  NormalizedInstance inst;
  inst.instance_id = std::move(id);
  inst.kind = kind;
  inst.content_hash = fnv1a64(text);
  inst.text = std::move(text);
  inst.provenance = provenance.empty() ? inst.instance_id : std::move(provenance);
  return inst;
}

json to_json(const NormalizedInstance& inst) {
  return json{{"instance_id", inst.instance_id},
              {"kind", to_string(inst.kind)},
              {"text", inst.text},
              {"content_hash", to_hex(inst.content_hash)},
              {"provenance", inst.provenance}};
}

NormalizedInstance normalized_instance_from_json(const json& j) {
  constexpr std::string_view ctx = "normalized instance";
  NormalizedInstance inst;
  inst.instance_id = require_string(j, "instance_id", ctx);
  inst.kind = parse_kind(require_string(j, "kind", ctx));
  inst.text = require_string(j, "text", ctx);
  if (inst.text.empty() || !in_normalized_alphabet(inst.text)) {
    fail(ErrorCode::parse, "normalized instance '" + inst.instance_id +
                               "': text violates the normalized alphabet");
  }
  inst.content_hash = fnv1a64(inst.text);
  if (auto h = optional_string(j, "content_hash", ctx); !h.empty() && from_hex(h) != inst.content_hash) {
    fail(ErrorCode::parse, "normalized instance '" + inst.instance_id + "': content_hash mismatch");
  }
  inst.provenance = optional_string(j, "provenance", ctx);
  if (inst.provenance.empty()) inst.provenance = inst.instance_id;
  return inst;
}

bool in_normalized_alphabet(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || c == ' ' || c == '?' || c == '!';
  });
}

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view ltrim(std::string_view s) {
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  return s;
}

std::string_view rtrim(std::string_view s) {
  while (!s.empty() && (is_ws(s.back()) || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string strip_delimiters(std::string_view body, const CommentSyntax& syntax) {
  std::string_view text = rtrim(body);
  while (!text.empty() && (is_ws(text.front()) || text.front() == '\n')) text.remove_prefix(1);

  // Block bodies: remove the outer open/close pair, longest opener first.
  bool is_block = false;
  const BlockDelimiter* chosen = nullptr;
  for (const auto& b : syntax.blocks) {
    if (text.starts_with(b.open) && (chosen == nullptr || b.open.size() > chosen->open.size())) {
      chosen = &b;
    }
  }
  if (chosen != nullptr) {
    is_block = true;
    text.remove_prefix(chosen->open.size());
    if (text.ends_with(chosen->close)) text.remove_suffix(chosen->close.size());
  }

  std::string out;
  std::size_t start = 0;
  bool first = true;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    const std::string_view raw_line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    std::string_view line = ltrim(raw_line);
    if (is_block) {
      if (!syntax.block_continuation.empty()) {
        while (line.starts_with(syntax.block_continuation)) {
          line.remove_prefix(syntax.block_continuation.size());
        }
      }
    } else {
      bool stripped = true;
      while (stripped) {
        stripped = false;
        for (const auto& p : syntax.line_prefixes) {
          if (line.starts_with(p)) {
            line.remove_prefix(p.size());
            stripped = true;
          }
        }
      }
    }
    if (!first) out += '\n';
    out.append(line);
    first = false;
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

std::string normalize_string(std::string_view body, const CommentSyntax& syntax) {
  const std::string stripped = strip_delimiters(body, syntax);
  std::string out;
  out.reserve(stripped.size());
  bool pending_space = false;
  for (char raw : stripped) {
    char c = raw;
    if (c == '\n' || is_ws(c)) {
      pending_space = true;
      continue;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (!((c >= 'a' && c <= 'z') || c == '?' || c == '!')) continue;
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

const std::vector<std::string>& default_license_keywords() {
  static const std::vector<std::string> keywords = {"license", "licence", "copyright",
                                                    "distributed under"};
  return keywords;
}

bool is_license_text(std::string_view text, std::span<const std::string> license_keywords) {
  return std::any_of(license_keywords.begin(), license_keywords.end(),
                     [&](const std::string& k) { return !k.empty() && text.find(k) != std::string_view::npos; });
}

NormalizeOutcome normalize_text(const RawArtifact& raw, const CommentSyntax& syntax,
                                std::span<const std::string> license_keywords) {
  NormalizeOutcome outcome;
  std::string text = normalize_string(raw.body, syntax);
  if (text.empty()) {
    outcome.reason = FilterReason::empty;
    return outcome;
  }
  if (is_license_text(text, license_keywords)) {
    outcome.reason = FilterReason::license;
    return outcome;
  }
  outcome.instance = make_instance(raw.id, raw.kind, std::move(text), raw.id);
  return outcome;
}

DedupResult dedupe(std::span<const NormalizedInstance> instances) {
  DedupResult result;
  std::unordered_set<std::string_view> seen;
  seen.reserve(instances.size());
  for (const auto& inst : instances) {
    if (seen.insert(inst.text).second) {
      result.kept.push_back(inst);
    } else {
      ++result.report.dropped[index_of(inst.kind)];
    }
  }
  return result;
}

}  // namespace scidebt
