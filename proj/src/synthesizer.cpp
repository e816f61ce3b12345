#include "mdforge/synthesizer.hpp"

#include <algorithm>
#include <stdexcept>

#include "mdforge/textutil.hpp"

namespace mdforge {

namespace {

constexpr const char* kFenceInfoTag = "text";

void check_inputs(const std::vector<AtomicUnit>& units, const StructuralSpec& spec) {
  if (units.empty()) {
    throw std::invalid_argument("synthesize: unit sequence is empty");
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].index != i) {
      throw std::invalid_argument("synthesize: unit indices are not dense");
    }
    if (units[i].text.empty()) {
      throw std::invalid_argument("synthesize: unit text is empty");
    }
  }
  if (spec.section_count < 1) {
    throw std::invalid_argument("synthesize: section_count must be at least 1");
  }
  if (spec.max_list_depth < 1 || spec.list_item_count < 1 || spec.blockquote_count < 0) {
    throw std::invalid_argument("synthesize: list or quote bounds out of range");
  }
  if (!spec.allowed_blocks.count(BlockType::BulletList) ||
      !spec.allowed_blocks.count(BlockType::Blockquote)) {
    throw std::invalid_argument(
        "synthesize: allowed blocks must include bullet lists and blockquotes");
  }
  if (spec.wrap_width && *spec.wrap_width < 20) {
    throw std::invalid_argument("synthesize: wrap width below 20");
  }
}

// Sequential dealer: hands out units in index order and pads once they run
// out (or once dealing is paused to leave a heading for the next section).
class SlotDealer {
 public:
  SlotDealer(const std::vector<AtomicUnit>& units) : units_(units) {}

  bool unit_available() const { return cursor_ < units_.size(); }
  const AtomicUnit& peek() const { return units_[cursor_]; }
  std::size_t take_unit() { return cursor_++; }

  Slot take(bool stop_at_heading) {
    if (unit_available() && !(stop_at_heading && peek().kind == UnitKind::Heading)) {
      return UnitRef{cursor_++};
    }
    return PaddingRef{pad_counter_++ % padding_sentinels().size()};
  }

  std::size_t padding_used() const { return pad_counter_; }

 private:
  const std::vector<AtomicUnit>& units_;
  std::size_t cursor_ = 0;
  std::size_t pad_counter_ = 0;
};

std::string resolve_slot(const Slot& slot, const std::vector<AtomicUnit>& units) {
  if (const auto* ref = std::get_if<UnitRef>(&slot)) return units[ref->index].text;
  return padding_sentinels()[std::get<PaddingRef>(slot).sentinel];
}

std::string resolve_heading(const HeadingBlock& block, const std::vector<AtomicUnit>& units) {
  return block.unit ? units[*block.unit].text : block.title;
}

std::vector<std::string> block_type_phrases(const std::set<BlockType>& allowed) {
  std::vector<std::string> phrases;
  for (BlockType type : kAllBlockTypes) {
    if (!allowed.count(type)) continue;
    switch (type) {
      case BlockType::BulletList: phrases.emplace_back("bullet lists"); break;
      case BlockType::OrderedList: phrases.emplace_back("ordered lists"); break;
      case BlockType::Table: phrases.emplace_back("tables"); break;
      case BlockType::Blockquote: phrases.emplace_back("blockquotes"); break;
      case BlockType::CodeFence: phrases.emplace_back("fenced code blocks"); break;
    }
  }
  return phrases;
}

}  // namespace

MarkdownDocument synthesize(const std::vector<AtomicUnit>& units,
                            const StructuralSpec& spec) {
  check_inputs(units, spec);

  MarkdownDocument doc;
  doc.source_unit_count = units.size();
  SlotDealer dealer(units);

  auto emit_single_unit_paragraph = [&] {
    ParagraphBlock para;
    para.slots.push_back(UnitRef{dealer.take_unit()});
    doc.blocks.emplace_back(std::move(para));
  };

  // Metadata run: units before it become paragraphs so the traversal stays in
  // index order.
  std::size_t first_meta = units.size();
  for (const AtomicUnit& unit : units) {
    if (unit.kind == UnitKind::MetadataField) {
      first_meta = unit.index;
      break;
    }
  }
  bool has_metadata_section = first_meta < units.size();
  if (has_metadata_section) {
    while (dealer.unit_available() && dealer.peek().index < first_meta) {
      emit_single_unit_paragraph();
    }
    doc.blocks.emplace_back(HeadingBlock{2, std::nullopt, "Metadata"});
    MetadataSectionBlock meta;
    while (dealer.unit_available() && dealer.peek().kind == UnitKind::MetadataField) {
      meta.fields.push_back(dealer.take_unit());
    }
    doc.blocks.emplace_back(std::move(meta));
  }

  const int content_sections =
      spec.section_count - (has_metadata_section ? 1 : 0);

  // Blockquote quota per content section, front-loaded.
  std::vector<int> quote_quota(std::max(content_sections, 0), 0);
  if (content_sections > 0) {
    for (int q = 0; q < spec.blockquote_count; ++q) {
      quote_quota[q % content_sections] += 1;
    }
  }

  const int table_rows = (spec.list_item_count + 1) / 2;

  for (int s = 0; s < content_sections; ++s) {
    const bool last = (s == content_sections - 1);
    const bool stop = !last;  // leave headings to title the next section

    if (dealer.unit_available() && dealer.peek().kind == UnitKind::Heading) {
      doc.blocks.emplace_back(HeadingBlock{2, dealer.take_unit(), ""});
    } else {
      doc.blocks.emplace_back(
          HeadingBlock{2, std::nullopt, "Section " + std::to_string(s + 1)});
    }

    auto heading_pause = [&] {
      return stop && dealer.unit_available() &&
             dealer.peek().kind == UnitKind::Heading;
    };

    if (dealer.unit_available() && !heading_pause()) {
      emit_single_unit_paragraph();
    }

    for (BlockType type : {BlockType::BulletList, BlockType::Table,
                           BlockType::Blockquote, BlockType::OrderedList,
                           BlockType::CodeFence}) {
      if (type == BlockType::Blockquote) {
        for (int q = 0; q < quote_quota[s]; ++q) {
          BlockquoteBlock quote;
          quote.slots.push_back(dealer.take(stop));
          quote.slots.push_back(dealer.take(stop));
          doc.blocks.emplace_back(std::move(quote));
        }
        continue;
      }
      if (!spec.allowed_blocks.count(type)) continue;
      switch (type) {
        case BlockType::BulletList:
        case BlockType::OrderedList: {
          std::vector<ListItem> items;
          items.reserve(spec.list_item_count);
          for (int k = 0; k < spec.list_item_count; ++k) {
            items.push_back(ListItem{k % spec.max_list_depth + 1, dealer.take(stop)});
          }
          if (type == BlockType::BulletList) {
            doc.blocks.emplace_back(BulletListBlock{std::move(items)});
          } else {
            doc.blocks.emplace_back(OrderedListBlock{std::move(items)});
          }
          break;
        }
        case BlockType::Table: {
          TableBlock table;
          table.header = {"Item", "Description"};
          for (int r = 0; r < table_rows; ++r) {
            table.rows.push_back({dealer.take(stop), dealer.take(stop)});
          }
          doc.blocks.emplace_back(std::move(table));
          break;
        }
        case BlockType::CodeFence: {
          CodeFenceBlock fence;
          fence.info_tag = kFenceInfoTag;
          for (int k = 0; k < spec.list_item_count; ++k) {
            fence.lines.push_back(dealer.take(stop));
          }
          doc.blocks.emplace_back(std::move(fence));
          break;
        }
        default:
          break;
      }
    }
  }

  // Whatever remains lands in trailing single-unit paragraphs.
  while (dealer.unit_available()) {
    emit_single_unit_paragraph();
  }

  // Unreachable through sample_spec; covers hand-built specs with a lone
  // metadata section.
  if (content_sections <= 0) {
    for (int q = 0; q < spec.blockquote_count; ++q) {
      BlockquoteBlock quote;
      quote.slots.push_back(dealer.take(false));
      quote.slots.push_back(dealer.take(false));
      doc.blocks.emplace_back(std::move(quote));
    }
  }

  doc.padding_count = dealer.padding_used();
  return doc;
}

std::string render_markdown(const MarkdownDocument& doc,
                            const std::vector<AtomicUnit>& units,
                            const StructuralSpec& spec) {
  const std::optional<int> width = spec.wrap_width;
  std::vector<std::vector<std::string>> rendered_blocks;

  auto wrap_into = [&](std::vector<std::string>& out, const std::string& text,
                       const std::string& first_prefix,
                       const std::string& cont_prefix) {
    const std::vector<std::string> contents =
        wrap_text(text, first_prefix.size(), cont_prefix.size(), width);
    for (std::size_t i = 0; i < contents.size(); ++i) {
      out.push_back((i == 0 ? first_prefix : cont_prefix) + contents[i]);
    }
  };

  for (const Block& block : doc.blocks) {
    std::vector<std::string> lines;
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, HeadingBlock>) {
            lines.push_back(std::string(b.level, '#') + " " + resolve_heading(b, units));
          } else if constexpr (std::is_same_v<T, ParagraphBlock>) {
            std::string text;
            for (const Slot& slot : b.slots) {
              if (!text.empty()) text.push_back(' ');
              text += resolve_slot(slot, units);
            }
            if (!text.empty()) wrap_into(lines, text, "", "");
          } else if constexpr (std::is_same_v<T, BulletListBlock>) {
            for (const ListItem& item : b.items) {
              const std::string indent(2 * (item.depth - 1), ' ');
              wrap_into(lines, resolve_slot(item.slot, units), indent + "- ",
                        indent + "  ");
            }
          } else if constexpr (std::is_same_v<T, OrderedListBlock>) {
            std::vector<int> counters;
            for (const ListItem& item : b.items) {
              counters.resize(item.depth, 0);
              counters[item.depth - 1] += 1;
              const std::string indent(2 * (item.depth - 1), ' ');
              const std::string marker =
                  std::to_string(counters[item.depth - 1]) + ". ";
              wrap_into(lines, resolve_slot(item.slot, units), indent + marker,
                        indent + std::string(marker.size(), ' '));
            }
          } else if constexpr (std::is_same_v<T, TableBlock>) {
            auto emit_row = [&](const std::vector<std::string>& cells) {
              std::string row = "|";
              for (const std::string& cell : cells) {
                row += " " + escape_table_cell(cell) + " |";
              }
              lines.push_back(row);
            };
            emit_row(b.header);
            std::string sep = "|";
            for (std::size_t i = 0; i < b.header.size(); ++i) sep += " --- |";
            lines.push_back(sep);
            for (const auto& row : b.rows) {
              std::vector<std::string> cells;
              cells.reserve(row.size());
              for (const Slot& slot : row) cells.push_back(resolve_slot(slot, units));
              emit_row(cells);
            }
          } else if constexpr (std::is_same_v<T, BlockquoteBlock>) {
            bool first = true;
            for (const Slot& slot : b.slots) {
              if (!first) lines.push_back(">");
              first = false;
              wrap_into(lines, resolve_slot(slot, units), "> ", "> ");
            }
          } else if constexpr (std::is_same_v<T, CodeFenceBlock>) {
            std::vector<std::string> content;
            std::size_t longest_run = 0;
            for (const Slot& slot : b.lines) {
              content.push_back(resolve_slot(slot, units));
              longest_run = std::max(longest_run, leading_backtick_run(content.back()));
            }
            const std::string delim(std::max<std::size_t>(3, longest_run + 1), '`');
            lines.push_back(delim + b.info_tag);
            for (std::string& text : content) lines.push_back(std::move(text));
            lines.push_back(delim);
          } else if constexpr (std::is_same_v<T, MetadataSectionBlock>) {
            bool first = true;
            for (std::size_t field : b.fields) {
              if (!first) lines.emplace_back();
              first = false;
              wrap_into(lines, units[field].text, "", "");
            }
          }
        },
        block);
    if (!lines.empty()) rendered_blocks.push_back(std::move(lines));
  }

  std::string out;
  for (std::size_t b = 0; b < rendered_blocks.size(); ++b) {
    if (b > 0) out.push_back('\n');
    for (const std::string& line : rendered_blocks[b]) {
      out += line;
      out.push_back('\n');
    }
  }
  return out;
}

std::string render_prompt(const StructuralSpec& spec) {
  std::string prompt =
      "Rewrite the source document as one Markdown document that satisfies "
      "every constraint below.\n"
      "\n"
      "Hard constraints:\n"
      "1. Markdown only: emit the Markdown document and nothing else.\n"
      "2. Strict content preservation: reproduce every content unit of the "
      "source exactly once, word for word; add nothing and drop nothing.\n"
      "3. Order invariance: keep all content units in their original order.\n"
      "\n"
      "Structural requirements:\n";

  prompt += "- Organize the document into exactly " +
            std::to_string(spec.section_count) + " level-2 sections (## headings).\n";
  prompt +=
      "- If the source contains metadata fields (Key: Value lines), group "
      "them under the first section, headed \"## Metadata\".\n";

  const std::vector<std::string> phrases = block_type_phrases(spec.allowed_blocks);
  prompt += "- Permitted block types inside sections: ";
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    if (i > 0) prompt += ", ";
    prompt += phrases[i];
  }
  prompt += ".\n";

  prompt += "- Give every list at most " + std::to_string(spec.max_list_depth) +
            " levels of nesting and exactly " +
            std::to_string(spec.list_item_count) + " items.\n";
  prompt += "- Include exactly " + std::to_string(spec.blockquote_count) +
            " blockquotes in total.\n";
  if (spec.allowed_blocks.count(BlockType::CodeFence)) {
    prompt +=
        "- Use fenced code blocks delimited by ``` with the info tag \"text\" "
        "for code-style content.\n";
  }
  if (spec.wrap_width) {
    prompt += "- Hard-wrap prose lines at " + std::to_string(*spec.wrap_width) +
              " characters; never break a line inside a word.\n";
  }
  prompt +=
      "- Fill any structural slot you cannot fill with source content with "
      "one of the padding sentinels: \"(no additional content)\", "
      "\"(intentionally left blank)\", or \"(see above)\".\n";
  return prompt;
}

}  // namespace mdforge
