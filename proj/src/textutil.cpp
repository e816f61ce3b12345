#include "mdforge/textutil.hpp"

#include <cctype>

namespace mdforge {

namespace {

bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_digit_char(char c) { return c >= '0' && c <= '9'; }

// Characters a leading backslash may guard. Must stay the exact image of
// needs_line_start_escape so escaping round-trips.
bool is_escapable_char(char c) {
  switch (c) {
    case '\\': case '>': case '|': case '<': case '#':
    case '`': case '-': case '*': case '+': case '=': case '_':
      return true;
    default:
      return is_digit_char(c);
  }
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_char(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space_char(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

}  // namespace

std::string normalize_ws(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (is_space_char(c)) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      lines.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  lines.emplace_back(text.substr(start));
  return lines;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space_char(text[begin])) ++begin;
  while (end > begin && is_space_char(text[end - 1])) --end;
  return std::string(text.substr(begin, end - begin));
}

bool is_blank(std::string_view text) {
  for (char c : text) {
    if (!is_space_char(c)) return false;
  }
  return true;
}

std::size_t leading_backtick_run(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '`') ++n;
  return n;
}

bool needs_line_start_escape(std::string_view word) {
  if (word.empty()) return false;
  const char first = word[0];
  if (first == '\\' || first == '>' || first == '|' || first == '<') return true;
  if (word == "-" || word == "*" || word == "+") return true;
  if (leading_backtick_run(word) >= 3) return true;

  // Bare ATX marker: 1..6 '#' and nothing else.
  if (first == '#') {
    std::size_t n = 0;
    while (n < word.size() && word[n] == '#') ++n;
    if (n == word.size() && n <= 6) return true;
  }

  // Ordered-list marker: 1..9 digits then '.' or ')'.
  if (is_digit_char(first)) {
    std::size_t n = 0;
    while (n < word.size() && is_digit_char(word[n])) ++n;
    if (n >= 1 && n <= 9 && n + 1 == word.size() &&
        (word[n] == '.' || word[n] == ')')) {
      return true;
    }
  }

  // Horizontal-rule / setext-style run: three or more of the same char.
  if (first == '-' || first == '_' || first == '*' || first == '=') {
    if (word.size() >= 3) {
      bool uniform = true;
      for (char c : word) {
        if (c != first) { uniform = false; break; }
      }
      if (uniform) return true;
    }
  }
  return false;
}

std::string escape_line_start(std::string_view text) {
  std::size_t word_end = 0;
  while (word_end < text.size() && !is_space_char(text[word_end])) ++word_end;
  if (needs_line_start_escape(text.substr(0, word_end))) {
    return "\\" + std::string(text);
  }
  return std::string(text);
}

std::string unescape_line_start(std::string_view line) {
  if (line.size() >= 2 && line[0] == '\\' && is_escapable_char(line[1])) {
    return std::string(line.substr(1));
  }
  return std::string(line);
}

std::string escape_table_cell(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\\' || c == '|') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string unescape_table_cell(std::string_view cell) {
  std::string out;
  out.reserve(cell.size());
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (cell[i] == '\\' && i + 1 < cell.size() &&
        (cell[i + 1] == '\\' || cell[i + 1] == '|')) {
      out.push_back(cell[i + 1]);
      ++i;
      continue;
    }
    out.push_back(cell[i]);
  }
  return out;
}

std::vector<std::string> wrap_text(std::string_view text,
                                   std::size_t first_prefix_len,
                                   std::size_t cont_prefix_len,
                                   std::optional<int> width) {
  if (!width) {
    return {escape_line_start(trim(text))};
  }
  const std::size_t limit = static_cast<std::size_t>(*width);
  const std::vector<std::string> words = split_words(text);
  if (words.empty()) return {""};

  std::vector<std::string> lines;
  std::string current;
  std::size_t current_len = first_prefix_len;
  for (const std::string& word : words) {
    if (current.empty()) {
      const std::string escaped = escape_line_start(word);
      current = escaped;
      current_len += escaped.size();
      continue;
    }
    if (current_len + 1 + word.size() <= limit) {
      current += ' ';
      current += word;
      current_len += 1 + word.size();
      continue;
    }
    lines.push_back(current);
    const std::string escaped = escape_line_start(word);
    current = escaped;
    current_len = cont_prefix_len + escaped.size();
  }
  lines.push_back(current);
  return lines;
}

}  // namespace mdforge
