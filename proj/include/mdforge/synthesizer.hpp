#pragma once

#include <string>
#include <vector>

#include "mdforge/core.hpp"

namespace mdforge {

// Builds a structured document that satisfies the spec while consuming every
// unit exactly once, in index order. Dealing scheme:
//   - units preceding the first metadata field become single-unit paragraphs,
//     then the metadata run forms a "Metadata" section (which counts toward
//     spec.section_count);
//   - each remaining section takes a heading-unit title when the next unit is
//     a Heading (otherwise a generated "Section k" title), one single-unit
//     paragraph, then one structured block per permitted type in the fixed
//     rotation bullet list, table, blockquote, ordered list, code fence;
//   - blockquotes are spread over the leading sections so the document totals
//     exactly spec.blockquote_count;
//   - filling a non-final section stops at the next Heading unit so it can
//     title the following section; in the final section leftover headings are
//     demoted into content slots;
//   - units left after the final section's blocks become single-unit
//     paragraphs; empty slots are filled with padding sentinels, cycling
//     through the sentinel set document-wide.
// Throws std::invalid_argument on empty units or an unsatisfiable spec.
MarkdownDocument synthesize(const std::vector<AtomicUnit>& units,
                            const StructuralSpec& spec);

// Canonical rendering: ATX headings, "-" bullets with two-space nesting
// indents, "1." ordered markers, pipe tables with a separator row, ">"
// blockquotes, backtick fences, one blank line between blocks, a single
// trailing newline. With spec.wrap_width set, prose lines (paragraphs, list
// items, quotes, metadata fields) are greedily word-wrapped; table rows,
// fence contents, and headings never wrap. Line starts that would read as
// block markup are backslash-escaped.
std::string render_markdown(const MarkdownDocument& doc,
                            const std::vector<AtomicUnit>& units,
                            const StructuralSpec& spec);

// Deterministic instruction prompt for the spec: fixed template, structural
// requirements filled from spec fields. Equal specs yield identical bytes.
std::string render_prompt(const StructuralSpec& spec);

}  // namespace mdforge
