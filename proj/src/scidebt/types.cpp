#include "scidebt/types.hpp"

#include "scidebt/error.hpp"

namespace scidebt {

namespace {

template <typename Enum, std::size_t N>
Enum parse_from(std::string_view s, const std::array<std::string_view, N>& names,
                std::string_view what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  fail(ErrorCode::parse, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::string_view, 4> kKindNames = {
    "code_comment", "commit_message", "issue_section", "pull_request_section"};
constexpr std::array<std::string_view, 3> kRoleNames = {"title", "description", "comment"};
constexpr std::array<std::string_view, 6> kClassNames = {
    "requirement_debt", "code_design_debt", "documentation_debt",
    "test_debt",        "scientific_debt",  "non_debt"};
constexpr std::array<std::string_view, 5> kIndicatorNames = {
    "translation_challenge", "assumption", "missing_edge_case", "computational_accuracy",
    "new_scientific_finding"};
constexpr std::array<std::string_view, 5> kOriginNames = {
    "satdaug", "cpp_satd", "awon", "cass_manual", "pseudo_label_verified"};

}  // namespace

std::string_view to_string(ArtifactKind k) { return kKindNames[index_of(k)]; }
std::string_view to_string(SectionRole r) { return kRoleNames[static_cast<std::size_t>(r)]; }
std::string_view to_string(SatdClass c) { return kClassNames[index_of(c)]; }
std::string_view to_string(Indicator i) { return kIndicatorNames[index_of(i)]; }
std::string_view to_string(Origin o) { return kOriginNames[static_cast<std::size_t>(o)]; }

std::string_view short_code(ArtifactKind k) {
  constexpr std::array<std::string_view, 4> codes = {"CC", "CM", "IS", "PR"};
  return codes[index_of(k)];
}

std::string_view display_name(ArtifactKind k) {
  constexpr std::array<std::string_view, 4> names = {"Code Comments", "Commit Messages",
                                                     "Issue Sections", "Pull Request Sections"};
  return names[index_of(k)];
}

std::string_view display_name(SatdClass c) {
  constexpr std::array<std::string_view, 6> names = {
      "Requirement Debt", "Code/Design Debt", "Documentation Debt",
      "Test Debt",        "Scientific Debt",  "Non-SATD"};
  return names[index_of(c)];
}

ArtifactKind parse_kind(std::string_view s) {
  return parse_from<ArtifactKind>(s, kKindNames, "artifact kind");
}
SectionRole parse_role(std::string_view s) {
  return parse_from<SectionRole>(s, kRoleNames, "section role");
}
SatdClass parse_class(std::string_view s) {
  return parse_from<SatdClass>(s, kClassNames, "SATD class");
}
Indicator parse_indicator(std::string_view s) {
  return parse_from<Indicator>(s, kIndicatorNames, "scientific debt indicator");
}
Origin parse_origin(std::string_view s) { return parse_from<Origin>(s, kOriginNames, "origin"); }

std::optional<SatdClass> try_parse_class(std::string_view s) {
  for (std::size_t i = 0; i < kClassNames.size(); ++i) {
    if (kClassNames[i] == s) return static_cast<SatdClass>(i);
  }
  return std::nullopt;
}

}  // namespace scidebt
