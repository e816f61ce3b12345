#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdforge {

// Collapses every whitespace run to a single space and trims both ends.
std::string normalize_ws(std::string_view text);

// Splits on '\n'; the final element is the unterminated tail (possibly "").
std::vector<std::string> split_lines(std::string_view text);

std::string trim(std::string_view text);
bool is_blank(std::string_view text);

// Length of the run of '`' characters at the start of the line.
std::size_t leading_backtick_run(std::string_view line);

// True when a line beginning with this word would be mistaken for block
// markup (heading, list marker, quote, table row, fence, rule, raw HTML) by
// the block parser, so the renderer must escape it.
bool needs_line_start_escape(std::string_view word);

// Escapes the first word of a single-line text when needed.
std::string escape_line_start(std::string_view text);

// Inverse of escape_line_start: drops one leading backslash when it guards an
// escapable character.
std::string unescape_line_start(std::string_view line);

// Escapes '\' and '|' so the text can sit inside a pipe-table cell.
std::string escape_table_cell(std::string_view text);
std::string unescape_table_cell(std::string_view cell);

// Greedy word wrap. Returns the content of each physical line with line-start
// escaping already applied; prefixes themselves are not included. The first
// line is measured with first_prefix_len, continuations with cont_prefix_len.
// Without a width the whole text becomes one escaped line. A line is split
// only between words; a word that alone overflows the width stays intact.
std::vector<std::string> wrap_text(std::string_view text,
                                   std::size_t first_prefix_len,
                                   std::size_t cont_prefix_len,
                                   std::optional<int> width);

}  // namespace mdforge
