#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scidebt/normalize.hpp"
#include "scidebt/types.hpp"

namespace scidebt {

// A phrase either matches a whole word sequence, or, when `prefix` is set,
// any word starting with the stored stem ("approximat" -> "approximation").
// In the config file a trailing '*' marks a stem.
struct KeywordPhrase {
  std::string text;
  bool prefix = false;

  std::string display() const { return prefix ? text + "*" : text; }
  friend bool operator==(const KeywordPhrase&, const KeywordPhrase&) = default;
};

struct KeywordConfig {
  std::array<std::vector<KeywordPhrase>, kIndicatorCount> groups;

  std::vector<KeywordPhrase>& group(Indicator i) { return groups[index_of(i)]; }
  const std::vector<KeywordPhrase>& group(Indicator i) const { return groups[index_of(i)]; }

  // Small curated lists per indicator; not the canonical inventory.
  static KeywordConfig defaults();
};

// Throws Error(invalid_argument) on empty or non-normalized phrases.
void validate(const KeywordConfig& config);

// Sectioned text: "[indicator]" headers, one phrase per line, '#' comments.
KeywordConfig parse_keyword_config(std::string_view text);
std::string render_keyword_config(const KeywordConfig& config);

struct CandidateHit {
  std::string instance_id;
  std::vector<std::string> matched_phrases;  // config order, displayed form
  std::vector<Indicator> matched_groups;     // enumeration order
};

// True iff `phrase` occurs in `text` starting and (unless prefix) ending on
// word boundaries. Words are separated by spaces, '?' and '!'.
bool phrase_occurs(std::string_view text, const KeywordPhrase& phrase);

std::vector<CandidateHit> keyword_scan(std::span<const NormalizedInstance> instances,
                                       const KeywordConfig& config);

std::string render_hits_csv(std::span<const CandidateHit> hits);

}  // namespace scidebt
