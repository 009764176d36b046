#include <doctest.h>

#include "oracles.hpp"
#include "scidebt/heuristics.hpp"

using namespace scidebt;

namespace {

// Naive boundary scan: every start position, then explicit boundary checks.
bool naive_occurs(const std::string& text, const KeywordPhrase& p) {
  auto sep = [](char c) { return c == ' ' || c == '?' || c == '!'; };
  for (std::size_t i = 0; i + p.text.size() <= text.size(); ++i) {
    if (text.compare(i, p.text.size(), p.text) != 0) continue;
    const bool left = i == 0 || sep(text[i - 1]);
    const std::size_t end = i + p.text.size();
    const bool right = p.prefix || end == text.size() || sep(text[end]);
    if (left && right) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("heuristics") {

TEST_CASE("keyword scan examples") {
  KeywordConfig cfg;
  cfg.group(Indicator::assumption).push_back({"assume", false});
  const std::vector<NormalizedInstance> insts = {
      make_instance("a", ArtifactKind::code_comment, "we assume the ice temperature equals the surface")};
  const auto hits = keyword_scan(insts, cfg);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].matched_groups == std::vector<Indicator>{Indicator::assumption});
  CHECK(hits[0].matched_phrases == std::vector<std::string>{"assume"});

  const std::vector<NormalizedInstance> typo = {make_instance("t", ArtifactKind::commit_message, "fix typo")};
  CHECK(keyword_scan(typo, KeywordConfig::defaults()).empty());

  CHECK(phrase_occurs("accuracy", {"accuracy", false}));
  CHECK_FALSE(phrase_occurs("inaccuracyx", {"accuracy", false}));
  CHECK(phrase_occurs("an approximation here", {"approximat", true}));
  CHECK_FALSE(phrase_occurs("reapproximation", {"approximat", true}));
  CHECK(phrase_occurs("does this edge case hold?", {"edge case", false}));
}

TEST_CASE("phrase matching agrees with a naive scanner") {
  Rng rng(12);
  const std::vector<std::string> words = {"acc", "accuracy", "edge", "case", "x", "assume", "assumed", "!", "?"};
  const std::vector<KeywordPhrase> phrases = {{"accuracy", false}, {"acc", true}, {"edge case", false},
                                              {"assume", false},   {"assum", true}, {"case", false}};
  for (int trial = 0; trial < 3000; ++trial) {
    std::string text;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string w = words[rng.below(words.size())];
      const bool punct = w == "!" || w == "?";
      if (text.empty()) text = punct ? "x" + w : w;
      else text += punct ? w : (rng.below(3) ? " " : "") + w;
    }
    for (const auto& p : phrases) {
      INFO(text, " / ", p.display());
      CHECK(phrase_occurs(text, p) == naive_occurs(text, p));
    }
  }
}

TEST_CASE("every reported phrase occurs and chunking does not matter") {
  Rng rng(4);
  std::vector<NormalizedInstance> insts;
  const std::vector<std::string> words = {"we", "assume", "tolerance", "is", "outdated", "edge", "case",
                                          "precision", "approximately", "fine", "no", "longer"};
  for (int i = 0; i < 400; ++i) {
    std::string t;
    for (std::size_t k = 0, n = 1 + rng.below(8); k < n; ++k) t += (t.empty() ? "" : " ") + words[rng.below(words.size())];
    insts.push_back(make_instance("i" + std::to_string(i), ArtifactKind::code_comment, t));
  }
  const auto cfg = KeywordConfig::defaults();
  const auto all = keyword_scan(insts, cfg);
  std::vector<CandidateHit> chunked;
  for (std::size_t s = 0; s < insts.size(); s += 37) {
    auto part = keyword_scan(std::span(insts).subspan(s, std::min<std::size_t>(37, insts.size() - s)), cfg);
    chunked.insert(chunked.end(), part.begin(), part.end());
  }
  REQUIRE(chunked.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(chunked[i].instance_id == all[i].instance_id);
    CHECK(chunked[i].matched_phrases == all[i].matched_phrases);
  }
  for (const auto& h : all) {
    const auto* inst = &*std::find_if(insts.begin(), insts.end(), [&](const auto& x) { return x.instance_id == h.instance_id; });
    CHECK_FALSE(h.matched_phrases.empty());
    for (const auto& shown : h.matched_phrases) {
      const bool stem = shown.back() == '*';
      CHECK(naive_occurs(inst->text, {stem ? shown.substr(0, shown.size() - 1) : shown, stem}));
    }
  }
}

TEST_CASE("keyword config text round trip and validation") {
  const auto cfg = KeywordConfig::defaults();
  const auto text = render_keyword_config(cfg);
  const auto back = parse_keyword_config(text);
  for (auto i : kAllIndicators) CHECK(back.group(i) == cfg.group(i));

  const auto parsed = parse_keyword_config("# comment\n[assumption]\nassume\napproximat*\n");
  REQUIRE(parsed.group(Indicator::assumption).size() == 2);
  CHECK(parsed.group(Indicator::assumption)[1].prefix);

  KeywordConfig bad;
  bad.group(Indicator::assumption).push_back({"Upper Case", false});
  CHECK_THROWS_AS(validate(bad), Error);
  CHECK_THROWS_AS(parse_keyword_config("[nonsense]\nx\n"), Error);
}

}  // TEST_SUITE
