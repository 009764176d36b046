#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace scidebt {

// The four mined artifact sources. Enumeration order is the canonical
// report column order (CC, CM, IS, PR).
enum class ArtifactKind { code_comment, commit_message, issue_section, pull_request_section };
inline constexpr std::size_t kArtifactKindCount = 4;
inline constexpr std::array<ArtifactKind, kArtifactKindCount> kAllKinds = {
    ArtifactKind::code_comment, ArtifactKind::commit_message, ArtifactKind::issue_section,
    ArtifactKind::pull_request_section};

enum class SectionRole { title, description, comment };

// Enumeration order doubles as the argmax tie-break order.
enum class SatdClass {
  requirement_debt,
  code_design_debt,
  documentation_debt,
  test_debt,
  scientific_debt,
  non_debt,
};
inline constexpr std::size_t kClassCount = 6;
inline constexpr std::array<SatdClass, kClassCount> kAllClasses = {
    SatdClass::requirement_debt, SatdClass::code_design_debt, SatdClass::documentation_debt,
    SatdClass::test_debt,        SatdClass::scientific_debt,  SatdClass::non_debt};

enum class Indicator {
  translation_challenge,
  assumption,
  missing_edge_case,
  computational_accuracy,
  new_scientific_finding,
};
inline constexpr std::size_t kIndicatorCount = 5;
inline constexpr std::array<Indicator, kIndicatorCount> kAllIndicators = {
    Indicator::translation_challenge, Indicator::assumption, Indicator::missing_edge_case,
    Indicator::computational_accuracy, Indicator::new_scientific_finding};

enum class Origin { satdaug, cpp_satd, awon, cass_manual, pseudo_label_verified };

constexpr std::size_t index_of(ArtifactKind k) { return static_cast<std::size_t>(k); }
constexpr std::size_t index_of(SatdClass c) { return static_cast<std::size_t>(c); }
constexpr std::size_t index_of(Indicator i) { return static_cast<std::size_t>(i); }

std::string_view to_string(ArtifactKind k);
std::string_view to_string(SectionRole r);
std::string_view to_string(SatdClass c);
std::string_view to_string(Indicator i);
std::string_view to_string(Origin o);

// Short column codes used in the distribution table (CC, CM, IS, PR).
std::string_view short_code(ArtifactKind k);
// Row / column captions used by the rendered reports.
std::string_view display_name(ArtifactKind k);
std::string_view display_name(SatdClass c);

// Parsers throw Error(parse) naming the rejected token.
ArtifactKind parse_kind(std::string_view s);
SectionRole parse_role(std::string_view s);
SatdClass parse_class(std::string_view s);
Indicator parse_indicator(std::string_view s);
Origin parse_origin(std::string_view s);

std::optional<SatdClass> try_parse_class(std::string_view s);

}  // namespace scidebt
