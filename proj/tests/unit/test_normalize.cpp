#include <doctest.h>

#include <set>

#include "golden.hpp"
#include "oracles.hpp"
#include "scidebt/normalize.hpp"

using namespace scidebt;

namespace {

RawArtifact raw(std::string body, ArtifactKind kind = ArtifactKind::commit_message) {
  RawArtifact a;
  a.id = "raw";
  a.kind = kind;
  a.body = std::move(body);
  return a;
}

NormalizedInstance inst(std::string id, ArtifactKind kind, std::string text) {
  return make_instance(std::move(id), kind, std::move(text));
}

}  // namespace

TEST_SUITE("normalize") {

TEST_CASE("normalize_text examples") {
  const auto reg = SyntaxRegistry::defaults();
  const auto& kw = default_license_keywords();
  auto a = normalize_text(raw("// TODO: Fix THIS hack!!", ArtifactKind::code_comment), reg.require("cpp"), kw);
  REQUIRE(a.instance);
  CHECK(a.instance->text == "todo fix this hack!!");

  auto b = normalize_text(raw("! line one\n! line two", ArtifactKind::code_comment), reg.require("fortran"), kw);
  REQUIRE(b.instance);
  CHECK(b.instance->text == "line one line two");

  auto c = normalize_text(raw("Fix bug #1234 (30% speedup)"), CommentSyntax::empty(), kw);
  REQUIRE(c.instance);
  CHECK(c.instance->text == "fix bug speedup");
}

TEST_CASE("license examples") {
  const auto& kw = default_license_keywords();
  CHECK(is_license_text("distributed under the apache license", kw));
  CHECK(is_license_text("todo check copyright of this algorithm s source paper", kw));
  CHECK_FALSE(is_license_text("fix accuracy of solver", kw));
  auto r = normalize_text(raw("Copyright (c) 2021 Lab"), CommentSyntax::empty(), kw);
  CHECK(r.filtered());
  CHECK(r.reason == FilterReason::license);
}

TEST_CASE("content hash is fnv of the text") {
  auto i = make_instance("x", ArtifactKind::code_comment, "fix the mesh");
  CHECK(i.content_hash == fnv1a64("fix the mesh"));
  CHECK(i.content_hash == make_instance("y", ArtifactKind::commit_message, "fix the mesh").content_hash);
}

TEST_CASE("dedup examples") {
  std::vector<NormalizedInstance> v = {inst("c1", ArtifactKind::code_comment, "same text"),
                                       inst("m1", ArtifactKind::commit_message, "same text")};
  auto r = dedupe(v);
  REQUIRE(r.kept.size() == 1);
  CHECK(r.kept[0].instance_id == "c1");
  CHECK(r.report.dropped[index_of(ArtifactKind::commit_message)] == 1);

  std::vector<NormalizedInstance> distinct = {inst("a", ArtifactKind::code_comment, "a"),
                                              inst("b", ArtifactKind::code_comment, "b")};
  CHECK(dedupe(distinct).kept == distinct);

  std::vector<NormalizedInstance> three(3, inst("c", ArtifactKind::code_comment, "dup"));
  for (int i = 0; i < 3; ++i) three[i].instance_id = "c" + std::to_string(i);
  auto t = dedupe(three);
  CHECK(t.kept.size() == 1);
  CHECK(t.report.dropped[index_of(ArtifactKind::code_comment)] == 2);
  CHECK(t.report.total() == 2);
}

TEST_CASE("dedup properties") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NormalizedInstance> v;
    const std::size_t n = rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back(inst("i" + std::to_string(i), kAllKinds[rng.below(4)],
                       std::string(1, static_cast<char>('a' + rng.below(8)))));
    }
    auto once = dedupe(v);
    std::set<std::string> texts;
    for (const auto& k : once.kept) CHECK(texts.insert(k.text).second);
    CHECK(once.kept.size() <= v.size());
    CHECK(once.kept.size() + once.report.total() == v.size());
    CHECK(dedupe(once.kept).kept == once.kept);
  }
}

TEST_CASE("golden raw to normalized pairs") {
  const auto out = golden::run_normalize_golden(SCIDEBT_SOURCE_DIR "/tests/data/normalize_golden.json");
  CHECK(out.cases >= 40);
  CHECK(out.languages.size() == 8);
  for (const auto& f : out.failures) FAIL_CHECK(f);
}

TEST_CASE("alphabet and idempotence fuzz") {
  const auto out = golden::fuzz_normalize(2000, 99);
  CHECK(out.produced > 0);
  for (const auto& v : out.violations) FAIL_CHECK(v);
}

}  // TEST_SUITE
