#include "scidebt/heuristics.hpp"

#include <sstream>

#include "scidebt/error.hpp"

namespace scidebt {

KeywordConfig KeywordConfig::defaults() {
  KeywordConfig c;
  c.group(Indicator::translation_challenge) = {{"simplif", true}, {"not correct but", false}};
  c.group(Indicator::assumption) = {{"assume", false}, {"assumption", false}, {"approximat", true}};
  c.group(Indicator::missing_edge_case) = {{"does not work for", false}, {"edge case", false}};
  c.group(Indicator::computational_accuracy) = {
      {"precision", false}, {"tolerance", false}, {"accuracy", false}};
  c.group(Indicator::new_scientific_finding) = {{"outdated", false}, {"no longer", false}};
  return c;
}

void validate(const KeywordConfig& config) {
  for (auto ind : kAllIndicators) {
    for (const auto& p : config.group(ind)) {
      if (p.text.empty()) {
        fail(ErrorCode::invalid_argument,
             "keyword group '" + std::string(to_string(ind)) + "' has an empty phrase");
      }
      if (!in_normalized_alphabet(p.text) || p.text.front() == ' ' || p.text.back() == ' ' ||
          p.text.find("  ") != std::string::npos) {
        fail(ErrorCode::invalid_argument, "keyword phrase '" + p.text +
                                              "' must be lowercase normalized text");
      }
    }
  }
}

KeywordConfig parse_keyword_config(std::string_view text) {
  KeywordConfig config;
  std::vector<KeywordPhrase>* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    std::string entry = line.substr(b, e - b + 1);
    if (entry.front() == '[') {
      if (entry.back() != ']') {
        fail(ErrorCode::parse, "keyword config line " + std::to_string(number) + ": bad header");
      }
      current = &config.group(parse_indicator(entry.substr(1, entry.size() - 2)));
      continue;
    }
    if (current == nullptr) {
      fail(ErrorCode::parse,
           "keyword config line " + std::to_string(number) + ": phrase before any group header");
    }
    KeywordPhrase phrase;
    if (entry.back() == '*') {
      phrase.prefix = true;
      entry.pop_back();
    }
    phrase.text = entry;
    current->push_back(std::move(phrase));
  }
  validate(config);
  return config;
}

std::string render_keyword_config(const KeywordConfig& config) {
  std::ostringstream out;
  for (auto ind : kAllIndicators) {
    out << '[' << to_string(ind) << "]\n";
    for (const auto& p : config.group(ind)) out << p.display() << '\n';
  }
  return out.str();
}

namespace {

bool is_boundary(char c) { return c == ' ' || c == '?' || c == '!'; }

}  // namespace

bool phrase_occurs(std::string_view text, const KeywordPhrase& phrase) {
  if (phrase.text.empty()) return false;
  std::size_t pos = text.find(phrase.text);
  while (pos != std::string_view::npos) {
    const bool start_ok = pos == 0 || is_boundary(text[pos - 1]);
    const std::size_t end = pos + phrase.text.size();
    const bool end_ok = phrase.prefix || end == text.size() || is_boundary(text[end]);
    if (start_ok && end_ok) return true;
    pos = text.find(phrase.text, pos + 1);
  }
  return false;
}

std::vector<CandidateHit> keyword_scan(std::span<const NormalizedInstance> instances,
                                       const KeywordConfig& config) {
  std::vector<CandidateHit> hits;
  for (const auto& inst : instances) {
    CandidateHit hit{inst.instance_id, {}, {}};
    for (auto ind : kAllIndicators) {
      bool group_hit = false;
      for (const auto& p : config.group(ind)) {
        if (phrase_occurs(inst.text, p)) {
          hit.matched_phrases.push_back(p.display());
          group_hit = true;
        }
      }
      if (group_hit) hit.matched_groups.push_back(ind);
    }
    if (!hit.matched_phrases.empty()) hits.push_back(std::move(hit));
  }
  return hits;
}

std::string render_hits_csv(std::span<const CandidateHit> hits) {
  std::ostringstream out;
  out << "instance_id,matched_groups,matched_phrases\n";
  for (const auto& h : hits) {
    std::string groups, phrases;
    for (auto g : h.matched_groups) groups += (groups.empty() ? "" : ";") + std::string(to_string(g));
    for (const auto& p : h.matched_phrases) phrases += (phrases.empty() ? "" : ";") + p;
    out << csv_cell(h.instance_id) << ',' << csv_cell(groups) << ',' << csv_cell(phrases) << '\n';
  }
  return out.str();
}

}  // namespace scidebt
