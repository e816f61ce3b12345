#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdforge/core.hpp"

namespace mdforge {

// Raw seed document as accepted from the input stream.
struct SeedDocument {
  std::size_t id = 0;  // dense, assigned in input order over kept records
  std::string category;
  std::string text;  // original text, before cleaning

  bool operator==(const SeedDocument&) const = default;
};

struct IngestResult {
  std::vector<SeedDocument> documents;
  std::size_t discarded = 0;  // malformed records skipped
};

// The closed set of seed categories.
const std::vector<std::string>& seed_categories();
bool is_seed_category(std::string_view name);

// Reads JSON-lines records ({"text": ..., "category"?: ...}). Malformed
// records (bad JSON, missing/empty text, unknown category) are counted and
// skipped, never fatal. Blank lines are ignored.
IngestResult ingest(std::istream& in);

// Normalizes raw text: line endings to LF, control characters other than LF
// and tab removed, tabs expanded to four spaces, trailing whitespace stripped
// from every terminated line, runs of three or more blank lines collapsed to
// one. Returns nullopt when nothing but whitespace survives ("document
// reduced to nothing").
std::optional<std::string> clean(std::string_view raw);

// Splits cleaned text into atomic units:
//   - ATX heading lines (1-6 '#' + space + text) become Heading units with
//     the markers stripped;
//   - "Key: Value" lines in the document head (before the first prose line;
//     headings and blank lines do not end the head) become MetadataField
//     units;
//   - remaining prose is split into Sentence units.
// May return an empty vector (degenerate document).
std::vector<AtomicUnit> segment(std::string_view cleaned);

// True when the line forms a metadata field: a 1-40 char key of letters,
// digits, spaces, or hyphens, a colon, then a non-empty value.
bool is_metadata_field_line(std::string_view line);

// Conservative sentence splitter used by segment. Boundaries sit after '.',
// '?', or '!' followed by whitespace and an ASCII uppercase letter, never
// inside parentheses and never after a single-letter abbreviation. The tail
// always forms a final sentence.
std::vector<std::string> split_sentences(std::string_view prose);

}  // namespace mdforge
