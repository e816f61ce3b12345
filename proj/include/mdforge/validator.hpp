#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdforge/core.hpp"

namespace mdforge {

// ---------------------------------------------------------------------------
// Best-effort block parse of arbitrary Markdown text
// ---------------------------------------------------------------------------

struct ParsedHeading {
  int level = 1;
  std::string text;
  std::size_t line = 0;  // 1-based, 0 = synthetic
  bool operator==(const ParsedHeading&) const = default;
};

struct ParsedParagraph {
  std::vector<std::string> lines;  // content with line-start escapes removed
  std::size_t line = 0;
  bool operator==(const ParsedParagraph&) const = default;
};

struct ParsedItem {
  int depth = 1;  // from indentation: two spaces per level
  std::string text;
  std::size_t line = 0;
  bool operator==(const ParsedItem&) const = default;
};

struct ParsedBulletList {
  std::vector<ParsedItem> items;
  bool operator==(const ParsedBulletList&) const = default;
};

struct ParsedOrderedList {
  std::vector<ParsedItem> items;
  bool operator==(const ParsedOrderedList&) const = default;
};

struct ParsedTable {
  std::vector<std::string> header;
  bool has_separator = false;
  std::vector<std::vector<std::string>> rows;  // data rows only
  std::size_t line = 0;
  bool operator==(const ParsedTable&) const = default;
};

struct ParsedBlockquote {
  // Quoted paragraphs: consecutive quote lines joined, split at empty quote
  // lines.
  std::vector<std::string> paragraphs;
  std::size_t line = 0;
  bool operator==(const ParsedBlockquote&) const = default;
};

struct ParsedCodeFence {
  std::string info;
  std::vector<std::string> lines;  // verbatim
  bool terminated = false;
  std::size_t line = 0;
  bool operator==(const ParsedCodeFence&) const = default;
};

using ParsedBlock =
    std::variant<ParsedHeading, ParsedParagraph, ParsedBulletList,
                 ParsedOrderedList, ParsedTable, ParsedBlockquote,
                 ParsedCodeFence>;

enum class LineClass {
  Blank,
  Heading,
  Paragraph,
  ListItem,
  TableRow,
  Quote,
  FenceDelimiter,
  FenceContent,
  Residual,
};

struct LineRecord {
  LineClass cls = LineClass::Blank;
  std::string raw;
  std::size_t content_offset = 0;  // where prose content starts
};

struct ParsedDocument {
  std::vector<ParsedBlock> blocks;
  std::vector<LineRecord> lines;
};

// Never fails: every line is classified, unparseable lines become residual
// lines that only the markdown-only check penalizes.
ParsedDocument parse_markdown(std::string_view text);

// The parse a faithful canonical rendering of the document must produce.
ParsedDocument projected_parse(const MarkdownDocument& doc,
                               const std::vector<AtomicUnit>& units);

// Block-structure equality; text is compared whitespace-normalized and line
// positions are ignored.
bool structurally_equal(const ParsedDocument& a, const ParsedDocument& b);

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  double score = 1.0;  // 1.0 exactly when details is empty
  std::vector<std::string> details;
};

// Fixed registry, each scored 1 - violations/opportunities floored at zero:
//   fence-balance, list-nesting, table-consistency, heading-hierarchy,
//   blockquote-count, allowed-blocks, wrap-compliance, markdown-only.
std::vector<CheckResult> run_checks(const ParsedDocument& doc,
                                    const StructuralSpec& spec);

// Arithmetic mean of the check scores.
double structure_score(const std::vector<CheckResult>& checks);

// ---------------------------------------------------------------------------
// Content preservation
// ---------------------------------------------------------------------------

// Prose fragments in document order with markup stripped; padding sentinels
// and empty fragments are dropped.
std::vector<std::string> extract_content_fragments(const ParsedDocument& doc);

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

// |LCS(unit texts, extracted fragments)| / |units| under exact match after
// whitespace normalization. Requires a non-empty unit sequence.
double content_preservation(const std::vector<AtomicUnit>& units,
                            std::string_view output_text);

// ---------------------------------------------------------------------------
// Composite score
// ---------------------------------------------------------------------------

struct CompositeScore {
  double r = 0.0;
  double r_sem = 0.0;
  double r_struct = 0.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

// r = lambda1 * r_sem + lambda2 * r_struct. Inputs must lie in [0, 1] and
// weights must be non-negative.
CompositeScore composite_score(double r_sem, double r_struct,
                               double lambda1 = 1.0, double lambda2 = 1.0);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct ValidationReport {
  std::vector<CheckResult> checks;
  double structure = 0.0;
  std::optional<double> preservation;  // needs source units
  std::optional<double> composite;     // needs preservation
  std::string validator_version = kValidatorVersion;
};

// Full validation of arbitrary output text against a spec. When units is
// non-null, content preservation and the composite score (unit weights) are
// included.
ValidationReport validate_output(std::string_view output_text,
                                 const StructuralSpec& spec,
                                 const std::vector<AtomicUnit>* units = nullptr);

// One-line JSON serialization of a report.
std::string report_to_json_string(const ValidationReport& report);

}  // namespace mdforge
