#include "mdforge/validator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mdforge/textutil.hpp"

namespace mdforge {
namespace {

std::string normalize_tabs_and_newlines(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    char c = input[i];
    if (c == '\r') {
      if (i + 1 < input.size() && input[i + 1] == '\n') ++i;
      out.push_back('\n');
    } else if (c == '\t') {
      out.append("    ");
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::size_t indent_width(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && line[i] == ' ') ++i;
  return i;
}

// Fence opener: <=3 spaces indent, >=3 backticks, info string without
// backticks. On match sets run length and info.
bool parse_fence_opener(const std::string& line, std::size_t* run,
                        std::string* info) {
  std::size_t ind = indent_width(line);
  if (ind > 3) return false;
  std::size_t r = leading_backtick_run(std::string_view(line).substr(ind));
  if (r < 3) return false;
  std::string_view rest = std::string_view(line).substr(ind + r);
  if (rest.find('`') != std::string_view::npos) return false;
  *run = r;
  *info = std::string(trim(rest));
  return true;
}

// Fence closer: <=3 spaces indent, backtick run at least as long as the
// opener, nothing but spaces after.
bool is_fence_closer(const std::string& line, std::size_t open_run) {
  std::size_t ind = indent_width(line);
  if (ind > 3) return false;
  std::size_t r = leading_backtick_run(std::string_view(line).substr(ind));
  if (r < open_run) return false;
  return trim(std::string_view(line).substr(ind + r)).empty();
}

bool parse_heading(const std::string& line, int* level, std::string* text,
                   std::size_t* offset) {
  std::size_t ind = indent_width(line);
  if (ind > 3) return false;
  std::size_t i = ind;
  while (i < line.size() && line[i] == '#') ++i;
  std::size_t hashes = i - ind;
  if (hashes < 1 || hashes > 6) return false;
  if (i < line.size() && line[i] != ' ') return false;
  if (i < line.size()) ++i;
  *level = static_cast<int>(hashes);
  *text = std::string(trim(std::string_view(line).substr(i)));
  *offset = i;
  return true;
}

bool parse_quote_line(const std::string& line, std::string* content,
                      std::size_t* offset) {
  std::size_t ind = indent_width(line);
  if (ind > 3) return false;
  if (ind >= line.size() || line[ind] != '>') return false;
  std::size_t i = ind + 1;
  if (i < line.size() && line[i] == ' ') ++i;
  *content = line.substr(i);
  *offset = i;
  return true;
}

struct ItemMatch {
  bool ordered = false;
  int depth = 1;
  std::string content;
  std::size_t offset = 0;
};

bool parse_list_item(const std::string& line, ItemMatch* m) {
  std::size_t ind = indent_width(line);
  if (ind >= line.size()) return false;
  char c = line[ind];
  std::size_t after_marker = 0;
  bool ordered = false;
  if (c == '-' || c == '*' || c == '+') {
    after_marker = ind + 1;
  } else if (c >= '0' && c <= '9') {
    std::size_t i = ind;
    while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
    if (i - ind > 9) return false;
    if (i >= line.size() || (line[i] != '.' && line[i] != ')')) return false;
    after_marker = i + 1;
    ordered = true;
  } else {
    return false;
  }
  if (after_marker < line.size() && line[after_marker] != ' ') return false;
  std::size_t content_at = std::min(after_marker + 1, line.size());
  m->ordered = ordered;
  m->depth = static_cast<int>(ind / 2) + 1;
  m->content = line.substr(content_at);
  m->offset = content_at;
  return true;
}

bool is_table_row_line(const std::string& line) {
  std::size_t ind = indent_width(line);
  return ind <= 3 && ind < line.size() && line[ind] == '|';
}

// Splits a pipe row into trimmed raw cell texts; '\|' does not split.
std::vector<std::string> split_table_cells(const std::string& line) {
  std::string trimmed = trim(line);
  std::string_view body = trimmed;
  if (!body.empty() && body.front() == '|') body.remove_prefix(1);
  // Strip a trailing unescaped pipe.
  if (!body.empty() && body.back() == '|') {
    std::size_t backslashes = 0;
    std::size_t i = body.size() - 1;
    while (i > 0 && body[i - 1] == '\\') {
      ++backslashes;
      --i;
    }
    if (backslashes % 2 == 0) body.remove_suffix(1);
  }
  std::vector<std::string> cells;
  std::string current;
  bool escaped = false;
  for (char c : body) {
    if (escaped) {
      current.push_back(c);
      escaped = false;
      continue;
    }
    if (c == '\\') {
      current.push_back(c);
      escaped = true;
      continue;
    }
    if (c == '|') {
      cells.push_back(std::string(trim(current)));
      current.clear();
      continue;
    }
    current.push_back(c);
  }
  cells.push_back(std::string(trim(current)));
  return cells;
}

bool is_separator_cells(const std::vector<std::string>& cells) {
  if (cells.empty()) return false;
  for (const std::string& cell : cells) {
    std::string_view v = cell;
    if (!v.empty() && v.front() == ':') v.remove_prefix(1);
    if (!v.empty() && v.back() == ':') v.remove_suffix(1);
    if (v.empty()) return false;
    for (char c : v) {
      if (c != '-') return false;
    }
  }
  return true;
}

bool is_html_like(const std::string& line) {
  std::size_t ind = indent_width(line);
  if (ind > 3) return false;
  if (ind + 1 >= line.size() || line[ind] != '<') return false;
  char c = line[ind + 1];
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '!' ||
         c == '/' || c == '?';
}

bool is_uniform_run(const std::string& line) {
  std::string v = trim(line);
  if (v.size() < 3) return false;
  char c = v.front();
  if (c != '-' && c != '_' && c != '*' && c != '=') return false;
  return std::all_of(v.begin(), v.end(), [c](char x) { return x == c; });
}

// ---------------------------------------------------------------------------
// Block builder
// ---------------------------------------------------------------------------

class BlockBuilder {
 public:
  explicit BlockBuilder(ParsedDocument* doc) : doc_(doc) {}

  void open_paragraph(std::size_t line_no) {
    mode_ = Mode::Para;
    para_ = ParsedParagraph{{}, line_no};
  }
  void paragraph_line(const std::string& content) {
    para_.lines.push_back(
        unescape_line_start(std::string(trim(content))));
  }
  bool in_paragraph() const { return mode_ == Mode::Para; }

  void open_list(bool ordered, std::size_t line_no) {
    mode_ = ordered ? Mode::Ordered : Mode::Bullet;
    items_.clear();
    list_line_ = line_no;
  }
  void list_item(int depth, const std::string& content, std::size_t line_no) {
    items_.push_back(
        ParsedItem{depth, unescape_line_start(std::string(trim(content))),
                   line_no});
  }
  void list_continuation(const std::string& content) {
    std::string text = unescape_line_start(std::string(trim(content)));
    if (items_.empty()) return;
    if (!items_.back().text.empty() && !text.empty())
      items_.back().text += " ";
    items_.back().text += text;
  }
  bool in_list() const {
    return mode_ == Mode::Bullet || mode_ == Mode::Ordered;
  }
  bool in_list(bool ordered) const {
    return mode_ == (ordered ? Mode::Ordered : Mode::Bullet);
  }

  void open_table(std::size_t line_no) {
    mode_ = Mode::Table;
    cell_rows_.clear();
    table_line_ = line_no;
  }
  void table_row(std::vector<std::string> cells) {
    cell_rows_.push_back(std::move(cells));
  }
  bool in_table() const { return mode_ == Mode::Table; }

  void open_quote(std::size_t line_no) {
    mode_ = Mode::Quote;
    quote_groups_.clear();
    quote_current_.clear();
    quote_open_ = false;
    quote_line_ = line_no;
  }
  void quote_line(const std::string& content) {
    if (trim(content).empty()) {
      if (quote_open_) {
        quote_groups_.push_back(quote_current_);
        quote_current_.clear();
        quote_open_ = false;
      }
      return;
    }
    std::string text = unescape_line_start(std::string(trim(content)));
    if (quote_open_ && !quote_current_.empty()) quote_current_ += " ";
    quote_current_ += text;
    quote_open_ = true;
  }
  bool in_quote() const { return mode_ == Mode::Quote; }

  void push_heading(int level, std::string text, std::size_t line_no) {
    flush();
    doc_->blocks.push_back(ParsedHeading{level, std::move(text), line_no});
  }

  void push_fence(ParsedCodeFence fence) {
    // Caller flushes before the opener line.
    doc_->blocks.push_back(std::move(fence));
  }

  void flush() {
    switch (mode_) {
      case Mode::None:
        break;
      case Mode::Para:
        if (!para_.lines.empty()) doc_->blocks.push_back(para_);
        break;
      case Mode::Bullet:
        if (!items_.empty()) doc_->blocks.push_back(ParsedBulletList{items_});
        break;
      case Mode::Ordered:
        if (!items_.empty()) doc_->blocks.push_back(ParsedOrderedList{items_});
        break;
      case Mode::Table:
        finalize_table();
        break;
      case Mode::Quote:
        if (quote_open_) {
          quote_groups_.push_back(quote_current_);
          quote_current_.clear();
          quote_open_ = false;
        }
        doc_->blocks.push_back(ParsedBlockquote{quote_groups_, quote_line_});
        break;
    }
    mode_ = Mode::None;
  }

 private:
  enum class Mode { None, Para, Bullet, Ordered, Table, Quote };

  void finalize_table() {
    if (cell_rows_.empty()) return;
    ParsedTable table;
    table.line = table_line_;
    table.header = unescape_cells(cell_rows_[0]);
    std::size_t first_data = 1;
    if (cell_rows_.size() >= 2 && is_separator_cells(cell_rows_[1])) {
      table.has_separator = true;
      first_data = 2;
    }
    for (std::size_t i = first_data; i < cell_rows_.size(); ++i) {
      table.rows.push_back(unescape_cells(cell_rows_[i]));
    }
    doc_->blocks.push_back(std::move(table));
  }

  static std::vector<std::string> unescape_cells(
      const std::vector<std::string>& cells) {
    std::vector<std::string> out;
    out.reserve(cells.size());
    for (const std::string& cell : cells) out.push_back(unescape_table_cell(cell));
    return out;
  }

  ParsedDocument* doc_;
  Mode mode_ = Mode::None;
  ParsedParagraph para_;
  std::vector<ParsedItem> items_;
  std::size_t list_line_ = 0;
  std::vector<std::vector<std::string>> cell_rows_;
  std::size_t table_line_ = 0;
  std::vector<std::string> quote_groups_;
  std::string quote_current_;
  bool quote_open_ = false;
  std::size_t quote_line_ = 0;
};

double ratio_score(std::size_t violations, std::size_t opportunities) {
  if (opportunities == 0) return 1.0;
  double s = 1.0 - static_cast<double>(violations) /
                       static_cast<double>(opportunities);
  return s < 0.0 ? 0.0 : s;
}

std::string describe_line(std::size_t line_no) {
  return "line " + std::to_string(line_no);
}

}  // namespace

// ---------------------------------------------------------------------------
// parse_markdown
// ---------------------------------------------------------------------------

ParsedDocument parse_markdown(std::string_view text) {
  std::string normalized = normalize_tabs_and_newlines(text);
  std::vector<std::string> lines = split_lines(normalized);
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  ParsedDocument doc;
  doc.lines.resize(lines.size());
  BlockBuilder builder(&doc);

  bool in_fence = false;
  std::size_t fence_run = 0;
  ParsedCodeFence fence;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    LineRecord& rec = doc.lines[i];
    rec.raw = line;
    std::size_t line_no = i + 1;

    if (in_fence) {
      if (is_fence_closer(line, fence_run)) {
        fence.terminated = true;
        builder.push_fence(std::move(fence));
        fence = ParsedCodeFence{};
        in_fence = false;
        rec.cls = LineClass::FenceDelimiter;
      } else {
        fence.lines.push_back(line);
        rec.cls = LineClass::FenceContent;
      }
      continue;
    }

    if (is_blank(line)) {
      builder.flush();
      rec.cls = LineClass::Blank;
      continue;
    }

    std::size_t run = 0;
    std::string info;
    if (parse_fence_opener(line, &run, &info)) {
      builder.flush();
      in_fence = true;
      fence_run = run;
      fence = ParsedCodeFence{info, {}, false, line_no};
      rec.cls = LineClass::FenceDelimiter;
      continue;
    }

    int level = 0;
    std::string heading_text;
    std::size_t offset = 0;
    if (parse_heading(line, &level, &heading_text, &offset)) {
      builder.push_heading(level, heading_text, line_no);
      rec.cls = LineClass::Heading;
      rec.content_offset = offset;
      continue;
    }

    std::string quote_content;
    if (parse_quote_line(line, &quote_content, &offset)) {
      if (!builder.in_quote()) {
        builder.flush();
        builder.open_quote(line_no);
      }
      builder.quote_line(quote_content);
      rec.cls = LineClass::Quote;
      rec.content_offset = offset;
      continue;
    }

    ItemMatch item;
    if (parse_list_item(line, &item)) {
      if (!builder.in_list(item.ordered)) {
        builder.flush();
        builder.open_list(item.ordered, line_no);
      }
      builder.list_item(item.depth, item.content, line_no);
      rec.cls = LineClass::ListItem;
      rec.content_offset = item.offset;
      continue;
    }

    if (is_table_row_line(line)) {
      if (!builder.in_table()) {
        builder.flush();
        builder.open_table(line_no);
      }
      builder.table_row(split_table_cells(line));
      rec.cls = LineClass::TableRow;
      continue;
    }

    if (is_html_like(line) || is_uniform_run(line)) {
      builder.flush();
      rec.cls = LineClass::Residual;
      continue;
    }

    // Plain prose: continuation of an open list item, otherwise paragraph.
    if (builder.in_list()) {
      builder.list_continuation(line);
      rec.cls = LineClass::ListItem;
      rec.content_offset = indent_width(line);
      continue;
    }
    if (!builder.in_paragraph()) {
      builder.flush();
      builder.open_paragraph(line_no);
    }
    builder.paragraph_line(line);
    rec.cls = LineClass::Paragraph;
    rec.content_offset = indent_width(line);
  }

  if (in_fence) {
    builder.push_fence(std::move(fence));
  }
  builder.flush();
  return doc;
}

// ---------------------------------------------------------------------------
// projected_parse
// ---------------------------------------------------------------------------

namespace {

std::string resolve_slot(const Slot& slot,
                         const std::vector<AtomicUnit>& units) {
  if (const UnitRef* ref = std::get_if<UnitRef>(&slot)) {
    return units.at(ref->index).text;
  }
  const std::vector<std::string>& sentinels = padding_sentinels();
  return sentinels[std::get<PaddingRef>(slot).sentinel % sentinels.size()];
}

}  // namespace

ParsedDocument projected_parse(const MarkdownDocument& doc,
                               const std::vector<AtomicUnit>& units) {
  ParsedDocument out;
  for (const Block& block : doc.blocks) {
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, HeadingBlock>) {
            std::string title =
                b.unit.has_value() ? units.at(*b.unit).text : b.title;
            out.blocks.push_back(ParsedHeading{b.level, title, 0});
          } else if constexpr (std::is_same_v<T, ParagraphBlock>) {
            std::string text;
            for (const Slot& slot : b.slots) {
              if (!text.empty()) text += " ";
              text += resolve_slot(slot, units);
            }
            out.blocks.push_back(ParsedParagraph{{text}, 0});
          } else if constexpr (std::is_same_v<T, BulletListBlock> ||
                               std::is_same_v<T, OrderedListBlock>) {
            std::vector<ParsedItem> items;
            for (const ListItem& item : b.items) {
              items.push_back(
                  ParsedItem{item.depth, resolve_slot(item.slot, units), 0});
            }
            if constexpr (std::is_same_v<T, BulletListBlock>) {
              out.blocks.push_back(ParsedBulletList{std::move(items)});
            } else {
              out.blocks.push_back(ParsedOrderedList{std::move(items)});
            }
          } else if constexpr (std::is_same_v<T, TableBlock>) {
            ParsedTable table;
            table.header = b.header;
            table.has_separator = true;
            for (const auto& row : b.rows) {
              std::vector<std::string> cells;
              for (const Slot& slot : row) cells.push_back(resolve_slot(slot, units));
              table.rows.push_back(std::move(cells));
            }
            out.blocks.push_back(std::move(table));
          } else if constexpr (std::is_same_v<T, BlockquoteBlock>) {
            ParsedBlockquote quote;
            for (const Slot& slot : b.slots)
              quote.paragraphs.push_back(resolve_slot(slot, units));
            out.blocks.push_back(std::move(quote));
          } else if constexpr (std::is_same_v<T, CodeFenceBlock>) {
            ParsedCodeFence fence;
            fence.info = b.info_tag;
            fence.terminated = true;
            for (const Slot& slot : b.lines)
              fence.lines.push_back(resolve_slot(slot, units));
            out.blocks.push_back(std::move(fence));
          } else if constexpr (std::is_same_v<T, MetadataSectionBlock>) {
            for (std::size_t field : b.fields) {
              out.blocks.push_back(
                  ParsedParagraph{{units.at(field).text}, 0});
            }
          }
        },
        block);
  }
  return out;
}

// ---------------------------------------------------------------------------
// structurally_equal
// ---------------------------------------------------------------------------

namespace {

bool norm_eq(const std::string& a, const std::string& b) {
  return normalize_ws(a) == normalize_ws(b);
}

bool items_equal(const std::vector<ParsedItem>& a,
                 const std::vector<ParsedItem>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].depth != b[i].depth || !norm_eq(a[i].text, b[i].text))
      return false;
  }
  return true;
}

bool cells_equal(const std::vector<std::string>& a,
                 const std::vector<std::string>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!norm_eq(a[i], b[i])) return false;
  }
  return true;
}

bool blocks_equal(const ParsedBlock& lhs, const ParsedBlock& rhs) {
  if (lhs.index() != rhs.index()) return false;
  return std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        const T& b = std::get<T>(rhs);
        if constexpr (std::is_same_v<T, ParsedHeading>) {
          return a.level == b.level && norm_eq(a.text, b.text);
        } else if constexpr (std::is_same_v<T, ParsedParagraph>) {
          std::string ja, jb;
          for (const std::string& l : a.lines) ja += l + " ";
          for (const std::string& l : b.lines) jb += l + " ";
          return norm_eq(ja, jb);
        } else if constexpr (std::is_same_v<T, ParsedBulletList> ||
                             std::is_same_v<T, ParsedOrderedList>) {
          return items_equal(a.items, b.items);
        } else if constexpr (std::is_same_v<T, ParsedTable>) {
          if (a.has_separator != b.has_separator) return false;
          if (!cells_equal(a.header, b.header)) return false;
          if (a.rows.size() != b.rows.size()) return false;
          for (std::size_t i = 0; i < a.rows.size(); ++i) {
            if (!cells_equal(a.rows[i], b.rows[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ParsedBlockquote>) {
          return cells_equal(a.paragraphs, b.paragraphs);
        } else if constexpr (std::is_same_v<T, ParsedCodeFence>) {
          return a.terminated == b.terminated && norm_eq(a.info, b.info) &&
                 cells_equal(a.lines, b.lines);
        } else {
          return false;
        }
      },
      lhs);
}

}  // namespace

bool structurally_equal(const ParsedDocument& a, const ParsedDocument& b) {
  if (a.blocks.size() != b.blocks.size()) return false;
  for (std::size_t i = 0; i < a.blocks.size(); ++i) {
    if (!blocks_equal(a.blocks[i], b.blocks[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

namespace {

CheckResult check_fence_balance(const ParsedDocument& doc) {
  CheckResult r{"fence-balance", 1.0, {}};
  std::size_t opened = 0;
  std::size_t unterminated = 0;
  for (const ParsedBlock& block : doc.blocks) {
    if (const ParsedCodeFence* fence = std::get_if<ParsedCodeFence>(&block)) {
      ++opened;
      if (!fence->terminated) {
        ++unterminated;
        r.details.push_back("unterminated fence opened at " +
                            describe_line(fence->line));
      }
    }
  }
  r.score = ratio_score(unterminated, opened);
  return r;
}

CheckResult check_list_nesting(const ParsedDocument& doc,
                               const StructuralSpec& spec) {
  CheckResult r{"list-nesting", 1.0, {}};
  std::size_t items = 0;
  std::size_t violations = 0;
  auto scan = [&](const std::vector<ParsedItem>& list) {
    int prev = 0;
    for (const ParsedItem& item : list) {
      ++items;
      bool bad = false;
      if (item.depth > prev + 1) {
        r.details.push_back("nesting jump to depth " +
                            std::to_string(item.depth) + " at " +
                            describe_line(item.line));
        bad = true;
      }
      if (item.depth > spec.max_list_depth) {
        r.details.push_back("depth " + std::to_string(item.depth) +
                            " exceeds limit " +
                            std::to_string(spec.max_list_depth) + " at " +
                            describe_line(item.line));
        bad = true;
      }
      if (bad) ++violations;
      prev = item.depth;
    }
  };
  for (const ParsedBlock& block : doc.blocks) {
    if (const ParsedBulletList* l = std::get_if<ParsedBulletList>(&block))
      scan(l->items);
    else if (const ParsedOrderedList* l = std::get_if<ParsedOrderedList>(&block))
      scan(l->items);
  }
  r.score = ratio_score(violations, items);
  return r;
}

CheckResult check_table_consistency(const ParsedDocument& doc) {
  CheckResult r{"table-consistency", 1.0, {}};
  std::size_t opportunities = 0;
  std::size_t violations = 0;
  for (const ParsedBlock& block : doc.blocks) {
    const ParsedTable* table = std::get_if<ParsedTable>(&block);
    if (table == nullptr) continue;
    opportunities += 1 + table->rows.size();
    if (!table->has_separator) {
      ++violations;
      r.details.push_back("table at " + describe_line(table->line) +
                          " lacks a separator row");
    }
    for (std::size_t i = 0; i < table->rows.size(); ++i) {
      if (table->rows[i].size() != table->header.size()) {
        ++violations;
        r.details.push_back(
            "table at " + describe_line(table->line) + " row " +
            std::to_string(i + 1) + " has " +
            std::to_string(table->rows[i].size()) + " cells, expected " +
            std::to_string(table->header.size()));
      }
    }
  }
  r.score = ratio_score(violations, opportunities);
  return r;
}

CheckResult check_heading_hierarchy(const ParsedDocument& doc,
                                    const StructuralSpec& spec) {
  CheckResult r{"heading-hierarchy", 1.0, {}};
  std::size_t heading_count = 0;
  std::size_t level2 = 0;
  std::size_t violations = 0;
  int prev = 0;
  for (const ParsedBlock& block : doc.blocks) {
    const ParsedHeading* h = std::get_if<ParsedHeading>(&block);
    if (h == nullptr) continue;
    ++heading_count;
    if (h->level == 2) ++level2;
    int limit = prev == 0 ? 2 : prev + 1;
    if (h->level > limit) {
      ++violations;
      r.details.push_back("heading level " + std::to_string(h->level) +
                          " skips levels at " + describe_line(h->line));
    }
    prev = h->level;
  }
  std::size_t expected = static_cast<std::size_t>(
      spec.section_count < 0 ? 0 : spec.section_count);
  std::size_t diff = level2 > expected ? level2 - expected : expected - level2;
  if (diff > 0) {
    r.details.push_back("found " + std::to_string(level2) +
                        " level-2 sections, expected " +
                        std::to_string(expected));
  }
  r.score = ratio_score(violations + diff, heading_count + expected);
  return r;
}

CheckResult check_blockquote_count(const ParsedDocument& doc,
                                   const StructuralSpec& spec) {
  CheckResult r{"blockquote-count", 1.0, {}};
  std::size_t observed = 0;
  for (const ParsedBlock& block : doc.blocks) {
    if (std::holds_alternative<ParsedBlockquote>(block)) ++observed;
  }
  std::size_t target =
      static_cast<std::size_t>(spec.blockquote_count < 0 ? 0
                                                         : spec.blockquote_count);
  std::size_t diff = observed > target ? observed - target : target - observed;
  if (diff > 0) {
    r.details.push_back("found " + std::to_string(observed) +
                        " blockquotes, expected " + std::to_string(target));
  }
  double denom = static_cast<double>(target == 0 ? 1 : target);
  double s = 1.0 - static_cast<double>(diff) / denom;
  r.score = s < 0.0 ? 0.0 : s;
  return r;
}

CheckResult check_allowed_blocks(const ParsedDocument& doc,
                                 const StructuralSpec& spec) {
  CheckResult r{"allowed-blocks", 1.0, {}};
  std::size_t total = 0;
  std::size_t violations = 0;
  for (const ParsedBlock& block : doc.blocks) {
    ++total;
    std::optional<BlockType> type;
    if (std::holds_alternative<ParsedBulletList>(block))
      type = BlockType::BulletList;
    else if (std::holds_alternative<ParsedOrderedList>(block))
      type = BlockType::OrderedList;
    else if (std::holds_alternative<ParsedTable>(block))
      type = BlockType::Table;
    else if (std::holds_alternative<ParsedBlockquote>(block))
      type = BlockType::Blockquote;
    else if (std::holds_alternative<ParsedCodeFence>(block))
      type = BlockType::CodeFence;
    if (type.has_value() && spec.allowed_blocks.count(*type) == 0) {
      ++violations;
      r.details.push_back(std::string("block type ") +
                          block_type_name(*type) + " is not permitted");
    }
  }
  r.score = ratio_score(violations, total);
  return r;
}

CheckResult check_wrap_compliance(const ParsedDocument& doc,
                                  const StructuralSpec& spec) {
  CheckResult r{"wrap-compliance", 1.0, {}};
  if (!spec.wrap_width.has_value()) return r;
  std::size_t width = static_cast<std::size_t>(*spec.wrap_width);
  std::size_t opportunities = 0;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < doc.lines.size(); ++i) {
    const LineRecord& rec = doc.lines[i];
    if (rec.cls != LineClass::Paragraph && rec.cls != LineClass::ListItem &&
        rec.cls != LineClass::Quote) {
      continue;
    }
    ++opportunities;
    if (rec.raw.size() <= width) continue;
    std::string_view content = std::string_view(rec.raw).substr(
        std::min(rec.content_offset, rec.raw.size()));
    std::vector<std::string> words;
    std::string word;
    for (char c : content) {
      if (c == ' ') {
        if (!word.empty()) words.push_back(word);
        word.clear();
      } else {
        word.push_back(c);
      }
    }
    if (!word.empty()) words.push_back(word);
    if (words.size() < 2) continue;  // single unbreakable token
    if (rec.content_offset + words[0].size() <= width) {
      ++violations;
      r.details.push_back("line " + std::to_string(i + 1) + " is " +
                          std::to_string(rec.raw.size()) +
                          " columns, limit " + std::to_string(width));
    }
  }
  r.score = ratio_score(violations, opportunities);
  return r;
}

CheckResult check_markdown_only(const ParsedDocument& doc) {
  CheckResult r{"markdown-only", 1.0, {}};
  std::size_t non_blank = 0;
  std::size_t residual = 0;
  for (std::size_t i = 0; i < doc.lines.size(); ++i) {
    if (doc.lines[i].cls == LineClass::Blank) continue;
    ++non_blank;
    if (doc.lines[i].cls == LineClass::Residual) {
      ++residual;
      r.details.push_back("line " + std::to_string(i + 1) +
                          " is not Markdown block content");
    }
  }
  r.score = ratio_score(residual, non_blank);
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(const ParsedDocument& doc,
                                    const StructuralSpec& spec) {
  std::vector<CheckResult> checks;
  checks.push_back(check_fence_balance(doc));
  checks.push_back(check_list_nesting(doc, spec));
  checks.push_back(check_table_consistency(doc));
  checks.push_back(check_heading_hierarchy(doc, spec));
  checks.push_back(check_blockquote_count(doc, spec));
  checks.push_back(check_allowed_blocks(doc, spec));
  checks.push_back(check_wrap_compliance(doc, spec));
  checks.push_back(check_markdown_only(doc));
  return checks;
}

double structure_score(const std::vector<CheckResult>& checks) {
  if (checks.empty()) return 1.0;
  double sum = 0.0;
  for (const CheckResult& c : checks) sum += c.score;
  return sum / static_cast<double>(checks.size());
}

// ---------------------------------------------------------------------------
// Content preservation
// ---------------------------------------------------------------------------

std::vector<std::string> extract_content_fragments(const ParsedDocument& doc) {
  std::vector<std::string> fragments;
  auto add = [&fragments](const std::string& text) {
    std::string norm = normalize_ws(text);
    if (norm.empty() || is_padding_text(norm)) return;
    fragments.push_back(std::move(norm));
  };
  for (const ParsedBlock& block : doc.blocks) {
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, ParsedHeading>) {
            add(b.text);
          } else if constexpr (std::is_same_v<T, ParsedParagraph>) {
            std::string joined;
            for (const std::string& line : b.lines) {
              if (!joined.empty()) joined += " ";
              joined += line;
            }
            add(joined);
          } else if constexpr (std::is_same_v<T, ParsedBulletList> ||
                               std::is_same_v<T, ParsedOrderedList>) {
            for (const ParsedItem& item : b.items) add(item.text);
          } else if constexpr (std::is_same_v<T, ParsedTable>) {
            for (const std::string& cell : b.header) add(cell);
            for (const auto& row : b.rows) {
              for (const std::string& cell : row) add(cell);
            }
          } else if constexpr (std::is_same_v<T, ParsedBlockquote>) {
            for (const std::string& group : b.paragraphs) add(group);
          } else if constexpr (std::is_same_v<T, ParsedCodeFence>) {
            for (const std::string& line : b.lines) add(line);
          }
        },
        block);
  }
  return fragments;
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double content_preservation(const std::vector<AtomicUnit>& units,
                            std::string_view output_text) {
  if (units.empty()) {
    throw std::invalid_argument(
        "content_preservation requires at least one source unit");
  }
  std::vector<std::string> expected;
  expected.reserve(units.size());
  for (const AtomicUnit& unit : units) expected.push_back(normalize_ws(unit.text));
  std::vector<std::string> actual =
      extract_content_fragments(parse_markdown(output_text));
  return static_cast<double>(lcs_length(expected, actual)) /
         static_cast<double>(units.size());
}

// ---------------------------------------------------------------------------
// Composite score
// ---------------------------------------------------------------------------

CompositeScore composite_score(double r_sem, double r_struct, double lambda1,
                               double lambda2) {
  if (!(r_sem >= 0.0 && r_sem <= 1.0) || !(r_struct >= 0.0 && r_struct <= 1.0)) {
    throw std::invalid_argument("reward terms must lie in [0, 1]");
  }
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
    throw std::invalid_argument("reward weights must be non-negative");
  }
  CompositeScore out;
  out.r_sem = r_sem;
  out.r_struct = r_struct;
  out.lambda1 = lambda1;
  out.lambda2 = lambda2;
  out.r = lambda1 * r_sem + lambda2 * r_struct;
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

ValidationReport validate_output(std::string_view output_text,
                                 const StructuralSpec& spec,
                                 const std::vector<AtomicUnit>* units) {
  ValidationReport report;
  ParsedDocument parsed = parse_markdown(output_text);
  report.checks = run_checks(parsed, spec);
  report.structure = structure_score(report.checks);
  if (units != nullptr && !units->empty()) {
    std::vector<std::string> expected;
    expected.reserve(units->size());
    for (const AtomicUnit& unit : *units)
      expected.push_back(normalize_ws(unit.text));
    std::vector<std::string> actual = extract_content_fragments(parsed);
    report.preservation = static_cast<double>(lcs_length(expected, actual)) /
                          static_cast<double>(units->size());
    report.composite =
        composite_score(*report.preservation, report.structure).r;
  }
  report.validator_version = spec.validator_version.empty()
                                 ? std::string(kValidatorVersion)
                                 : spec.validator_version;
  return report;
}

std::string report_to_json_string(const ValidationReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& check : report.checks) {
    checks.push_back({{"name", check.name},
                      {"score", check.score},
                      {"details", check.details}});
  }
  nlohmann::json j{{"checks", checks},
                   {"structure_score", report.structure},
                   {"validator_version", report.validator_version}};
  if (report.preservation.has_value())
    j["content_preservation"] = *report.preservation;
  if (report.composite.has_value()) j["composite"] = *report.composite;
  return j.dump();
}

}  // namespace mdforge
