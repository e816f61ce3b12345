#include "mdforge/ingest.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "mdforge/textutil.hpp"

namespace mdforge {

namespace {

bool is_upper_ascii(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower_ascii(char c) { return c >= 'a' && c <= 'z'; }
bool is_alpha_ascii(char c) { return is_upper_ascii(c) || is_lower_ascii(c); }
bool is_digit_ascii(char c) { return c >= '0' && c <= '9'; }

// Returns the heading payload when the line is an ATX heading with non-blank
// text, else nullopt.
std::optional<std::string> heading_text(std::string_view line) {
  std::size_t hashes = 0;
  while (hashes < line.size() && line[hashes] == '#') ++hashes;
  if (hashes < 1 || hashes > 6) return std::nullopt;
  if (hashes >= line.size() || line[hashes] != ' ') return std::nullopt;
  std::string text = trim(line.substr(hashes + 1));
  if (text.empty()) return std::nullopt;
  return text;
}

}  // namespace

const std::vector<std::string>& seed_categories() {
  static const std::vector<std::string> kCategories = {
      "academic", "official", "technical", "legal",
      "business", "educational", "news", "reference",
  };
  return kCategories;
}

bool is_seed_category(std::string_view name) {
  const auto& cats = seed_categories();
  return std::find(cats.begin(), cats.end(), name) != cats.end();
}

IngestResult ingest(std::istream& in) {
  IngestResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank(line)) continue;
    const nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      ++result.discarded;
      continue;
    }
    if (!record.contains("text") || !record["text"].is_string()) {
      ++result.discarded;
      continue;
    }
    std::string text = record["text"].get<std::string>();
    if (trim(text).empty()) {
      ++result.discarded;
      continue;
    }
    std::string category = "reference";
    if (record.contains("category")) {
      if (!record["category"].is_string() ||
          !is_seed_category(record["category"].get<std::string>())) {
        ++result.discarded;
        continue;
      }
      category = record["category"].get<std::string>();
    }
    SeedDocument doc;
    doc.id = result.documents.size();
    doc.category = std::move(category);
    doc.text = std::move(text);
    result.documents.push_back(std::move(doc));
  }
  return result;
}

std::optional<std::string> clean(std::string_view raw) {
  // Line endings to LF.
  std::string text;
  text.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r') {
      if (i + 1 < raw.size() && raw[i + 1] == '\n') continue;
      text.push_back('\n');
      continue;
    }
    text.push_back(raw[i]);
  }

  // Drop control characters other than LF and tab; expand tabs.
  std::string expanded;
  expanded.reserve(text.size());
  for (char c : text) {
    const unsigned char uc = static_cast<unsigned char>(c);
    if (c == '\t') {
      expanded.append(4, ' ');
      continue;
    }
    if (c != '\n' && (uc < 0x20 || uc == 0x7F)) continue;
    expanded.push_back(c);
  }

  // Strip trailing whitespace from every terminated line; the unterminated
  // tail keeps its spacing.
  std::vector<std::string> lines = split_lines(expanded);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    std::size_t end = lines[i].size();
    while (end > 0 && lines[i][end - 1] == ' ') --end;
    lines[i].resize(end);
  }

  // Collapse runs of three or more blank lines to a single blank line.
  std::vector<std::string> kept;
  kept.reserve(lines.size());
  std::size_t i = 0;
  while (i + 1 < lines.size()) {
    if (!lines[i].empty()) {
      kept.push_back(lines[i]);
      ++i;
      continue;
    }
    std::size_t run = 0;
    while (i + 1 < lines.size() && lines[i].empty()) {
      ++run;
      ++i;
    }
    const std::size_t emit = run >= 3 ? 1 : run;
    for (std::size_t k = 0; k < emit; ++k) kept.emplace_back();
  }
  kept.push_back(lines.back());

  std::string out;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (k > 0) out.push_back('\n');
    out += kept[k];
  }

  if (trim(out).empty()) return std::nullopt;
  return out;
}

bool is_metadata_field_line(std::string_view line) {
  const std::string trimmed = trim(line);
  const std::size_t colon = trimmed.find(':');
  if (colon == std::string::npos || colon == 0 || colon > 40) return false;
  bool key_has_content = false;
  for (std::size_t i = 0; i < colon; ++i) {
    const char c = trimmed[i];
    if (!(is_alpha_ascii(c) || is_digit_ascii(c) || c == ' ' || c == '-')) {
      return false;
    }
    if (c != ' ') key_has_content = true;
  }
  if (!key_has_content) return false;
  if (colon + 1 >= trimmed.size() || trimmed[colon + 1] != ' ') return false;
  return !is_blank(trimmed.substr(colon + 1));
}

std::vector<std::string> split_sentences(std::string_view prose) {
  std::vector<std::string> sentences;
  const std::string text = normalize_ws(prose);
  std::size_t start = 0;
  int paren_depth = 0;

  auto flush = [&](std::size_t end) {
    const std::string sentence = trim(std::string_view(text).substr(start, end - start));
    if (!sentence.empty()) sentences.push_back(sentence);
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') {
      ++paren_depth;
      continue;
    }
    if (c == ')') {
      if (paren_depth > 0) --paren_depth;
      continue;
    }
    if (c != '.' && c != '?' && c != '!') continue;
    if (paren_depth > 0) continue;

    // Never split right after a single-letter abbreviation ("J. Smith").
    if (c == '.') {
      std::size_t letters = 0;
      std::size_t back = i;
      while (back > start && is_alpha_ascii(text[back - 1])) {
        ++letters;
        --back;
      }
      if (letters == 1) continue;
    }

    std::size_t j = i + 1;
    if (j == text.size()) break;  // handled by the final flush
    std::size_t ws = 0;
    while (j < text.size() && text[j] == ' ') {
      ++ws;
      ++j;
    }
    if (ws == 0 || j == text.size()) continue;
    if (!is_upper_ascii(text[j])) continue;

    flush(i + 1);
    start = j;
  }
  flush(text.size());
  return sentences;
}

std::vector<AtomicUnit> segment(std::string_view cleaned) {
  std::vector<AtomicUnit> units;
  std::string paragraph;

  auto add_unit = [&](UnitKind kind, std::string text) {
    AtomicUnit unit;
    unit.index = units.size();
    unit.kind = kind;
    unit.text = std::move(text);
    units.push_back(std::move(unit));
  };

  auto flush_paragraph = [&] {
    if (paragraph.empty()) return;
    for (std::string& sentence : split_sentences(paragraph)) {
      add_unit(UnitKind::Sentence, std::move(sentence));
    }
    paragraph.clear();
  };

  bool in_head = true;
  for (const std::string& line : split_lines(cleaned)) {
    if (is_blank(line)) {
      flush_paragraph();
      continue;
    }
    if (auto title = heading_text(line)) {
      flush_paragraph();
      add_unit(UnitKind::Heading, std::move(*title));
      continue;
    }
    if (in_head && is_metadata_field_line(line)) {
      add_unit(UnitKind::MetadataField, trim(line));
      continue;
    }
    in_head = false;
    if (!paragraph.empty()) paragraph.push_back(' ');
    paragraph += line;
  }
  flush_paragraph();
  return units;
}

}  // namespace mdforge
