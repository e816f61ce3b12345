#include "mdforge/core.hpp"

#include <algorithm>

#include "mdforge/textutil.hpp"

namespace mdforge {

namespace {

void collect_slot(const Slot& slot, std::vector<std::size_t>& out) {
  if (const auto* ref = std::get_if<UnitRef>(&slot)) {
    out.push_back(ref->index);
  }
}

std::size_t count_padding_slot(const Slot& slot) {
  return std::holds_alternative<PaddingRef>(slot) ? 1 : 0;
}

}  // namespace

const char* block_type_name(BlockType type) {
  switch (type) {
    case BlockType::BulletList: return "BulletList";
    case BlockType::OrderedList: return "OrderedList";
    case BlockType::Table: return "Table";
    case BlockType::Blockquote: return "Blockquote";
    case BlockType::CodeFence: return "CodeFence";
  }
  return "?";
}

std::optional<BlockType> block_type_from_name(const std::string& name) {
  for (BlockType type : kAllBlockTypes) {
    if (name == block_type_name(type)) return type;
  }
  return std::nullopt;
}

const std::vector<std::string>& padding_sentinels() {
  static const std::vector<std::string> kSentinels = {
      "(no additional content)",
      "(intentionally left blank)",
      "(see above)",
  };
  return kSentinels;
}

bool is_padding_text(const std::string& text) {
  const std::string norm = normalize_ws(text);
  const auto& sentinels = padding_sentinels();
  return std::find(sentinels.begin(), sentinels.end(), norm) != sentinels.end();
}

std::vector<std::size_t> traversal_units(const MarkdownDocument& doc) {
  std::vector<std::size_t> order;
  for (const Block& block : doc.blocks) {
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, HeadingBlock>) {
            if (b.unit) order.push_back(*b.unit);
          } else if constexpr (std::is_same_v<T, ParagraphBlock>) {
            for (const Slot& s : b.slots) collect_slot(s, order);
          } else if constexpr (std::is_same_v<T, BulletListBlock> ||
                               std::is_same_v<T, OrderedListBlock>) {
            for (const ListItem& item : b.items) collect_slot(item.slot, order);
          } else if constexpr (std::is_same_v<T, TableBlock>) {
            for (const auto& row : b.rows) {
              for (const Slot& s : row) collect_slot(s, order);
            }
          } else if constexpr (std::is_same_v<T, BlockquoteBlock>) {
            for (const Slot& s : b.slots) collect_slot(s, order);
          } else if constexpr (std::is_same_v<T, CodeFenceBlock>) {
            for (const Slot& s : b.lines) collect_slot(s, order);
          } else if constexpr (std::is_same_v<T, MetadataSectionBlock>) {
            for (std::size_t f : b.fields) order.push_back(f);
          }
        },
        block);
  }
  return order;
}

std::string document_error(const MarkdownDocument& doc) {
  const std::vector<std::size_t> order = traversal_units(doc);
  if (order.size() != doc.source_unit_count) {
    return "traversal covers " + std::to_string(order.size()) + " units, expected " +
           std::to_string(doc.source_unit_count);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] != i) {
      return "traversal position " + std::to_string(i) + " holds unit " +
             std::to_string(order[i]);
    }
  }

  std::size_t padding = 0;
  int prev_heading_level = 0;
  for (const Block& block : doc.blocks) {
    std::string err;
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, HeadingBlock>) {
            if (b.level < 1 || b.level > 6) {
              err = "heading level " + std::to_string(b.level) + " out of range";
            } else if (prev_heading_level == 0 && b.level > 2) {
              err = "first heading has level " + std::to_string(b.level);
            } else if (prev_heading_level != 0 && b.level > prev_heading_level + 1) {
              err = "heading level jumps from " + std::to_string(prev_heading_level) +
                    " to " + std::to_string(b.level);
            }
            prev_heading_level = b.level;
          } else if constexpr (std::is_same_v<T, ParagraphBlock>) {
            for (const Slot& s : b.slots) padding += count_padding_slot(s);
          } else if constexpr (std::is_same_v<T, BulletListBlock> ||
                               std::is_same_v<T, OrderedListBlock>) {
            int prev_depth = 0;
            for (const ListItem& item : b.items) {
              if (item.depth < 1) {
                err = "list item depth " + std::to_string(item.depth) + " below 1";
                break;
              }
              if (item.depth > prev_depth + 1) {
                err = "list item depth jumps from " + std::to_string(prev_depth) +
                      " to " + std::to_string(item.depth);
                break;
              }
              prev_depth = item.depth;
              padding += count_padding_slot(item.slot);
            }
          } else if constexpr (std::is_same_v<T, TableBlock>) {
            for (const auto& row : b.rows) {
              if (row.size() != b.header.size()) {
                err = "table row width " + std::to_string(row.size()) +
                      " differs from header width " + std::to_string(b.header.size());
                break;
              }
              for (const Slot& s : row) padding += count_padding_slot(s);
            }
          } else if constexpr (std::is_same_v<T, BlockquoteBlock>) {
            for (const Slot& s : b.slots) padding += count_padding_slot(s);
          } else if constexpr (std::is_same_v<T, CodeFenceBlock>) {
            for (const Slot& s : b.lines) padding += count_padding_slot(s);
          }
        },
        block);
    if (!err.empty()) return err;
  }

  if (padding != doc.padding_count) {
    return "padding_count is " + std::to_string(doc.padding_count) + ", found " +
           std::to_string(padding) + " padding slots";
  }
  return "";
}

}  // namespace mdforge
