#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scidebt/ingest.hpp"
#include "scidebt/types.hpp"
#include "scidebt/util.hpp"

namespace scidebt {

// Text is non-empty, drawn from {a-z, ' ', '?', '!'}, single-spaced, trimmed.
struct NormalizedInstance {
  std::string instance_id;
  ArtifactKind kind = ArtifactKind::code_comment;
  std::string text;
  std::uint64_t content_hash = 0;
  std::string provenance;  // RawArtifact id

  friend bool operator==(const NormalizedInstance&, const NormalizedInstance&) = default;
};

NormalizedInstance make_instance(std::string id, ArtifactKind kind, std::string text,
                                 std::string provenance = {});

json to_json(const NormalizedInstance& inst);
NormalizedInstance normalized_instance_from_json(const json& j);

bool in_normalized_alphabet(std::string_view text);

// Removes the profile's comment delimiters from a raw comment body. Lines
// remain separated by '\n'.
std::string strip_delimiters(std::string_view body, const CommentSyntax& syntax);

// The fixed pipeline: strip delimiters, join lines, lowercase, drop every
// character outside letters/space/'?'/'!', collapse whitespace and trim.
std::string normalize_string(std::string_view body, const CommentSyntax& syntax);

const std::vector<std::string>& default_license_keywords();

bool is_license_text(std::string_view text, std::span<const std::string> license_keywords);

enum class FilterReason { empty, license };

struct NormalizeOutcome {
  std::optional<NormalizedInstance> instance;
  FilterReason reason = FilterReason::empty;  // meaningful only without instance

  bool filtered() const { return !instance.has_value(); }
};

NormalizeOutcome normalize_text(const RawArtifact& raw, const CommentSyntax& syntax,
                                std::span<const std::string> license_keywords);

struct DedupReport {
  std::array<std::size_t, kArtifactKindCount> dropped{};

  std::size_t total() const {
    std::size_t n = 0;
    for (auto d : dropped) n += d;
    return n;
  }
};

struct DedupResult {
  std::vector<NormalizedInstance> kept;
  DedupReport report;
};

// First occurrence of each distinct text wins, across all artifact kinds.
DedupResult dedupe(std::span<const NormalizedInstance> instances);

}  // namespace scidebt
