#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace mdforge {

// Version tag stamped into every structural spec and validation report.
// Bump whenever a check definition or the canonical rendering changes shape.
inline constexpr const char* kValidatorVersion = "mdforge-validator-1";

// ---------------------------------------------------------------------------
// Atomic units
// ---------------------------------------------------------------------------

enum class UnitKind { Heading, MetadataField, Sentence };

// Smallest indivisible piece of source content. Units are indexed in document
// order; text is single-line, trimmed, and never empty.
struct AtomicUnit {
  std::size_t index = 0;
  UnitKind kind = UnitKind::Sentence;
  std::string text;

  bool operator==(const AtomicUnit&) const = default;
};

// ---------------------------------------------------------------------------
// Structural specs
// ---------------------------------------------------------------------------

// Structured block types a spec may permit. Heading, Paragraph, and the
// metadata section are always permitted and are not listed here.
enum class BlockType { BulletList, OrderedList, Table, Blockquote, CodeFence };

inline constexpr BlockType kAllBlockTypes[] = {
    BlockType::BulletList, BlockType::OrderedList, BlockType::Table,
    BlockType::Blockquote, BlockType::CodeFence};

const char* block_type_name(BlockType type);
std::optional<BlockType> block_type_from_name(const std::string& name);

// Full structural contract for one generated target. Given (seed_index,
// variant_index, difficulty), the sampler fills in every other field
// deterministically.
struct StructuralSpec {
  std::size_t seed_index = 0;
  std::size_t variant_index = 0;
  int difficulty = 1;  // 1..3
  int section_count = 1;
  int max_list_depth = 1;
  int list_item_count = 1;
  int blockquote_count = 0;
  std::set<BlockType> allowed_blocks;
  std::optional<int> wrap_width;  // absent = no wrap constraint
  std::string validator_version = kValidatorVersion;

  bool operator==(const StructuralSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Document model
// ---------------------------------------------------------------------------

// A content slot either references a source unit by index or holds a padding
// sentinel (by index into padding_sentinels()). Text is resolved at render
// time; blocks never copy unit text.
struct UnitRef {
  std::size_t index = 0;
  bool operator==(const UnitRef&) const = default;
};

struct PaddingRef {
  std::size_t sentinel = 0;
  bool operator==(const PaddingRef&) const = default;
};

using Slot = std::variant<UnitRef, PaddingRef>;

// Fixed sentinel strings used to fill structural slots when source units run
// out. Padding is recognizable on sight and is ignored by content scoring.
const std::vector<std::string>& padding_sentinels();

// True when the given text (whitespace-normalized) equals one of the padding
// sentinels.
bool is_padding_text(const std::string& text);

struct HeadingBlock {
  int level = 2;                    // 1..6
  std::optional<std::size_t> unit;  // title from a Heading unit when set
  std::string title;                // generated title when unit is absent
  bool operator==(const HeadingBlock&) const = default;
};

struct ParagraphBlock {
  std::vector<Slot> slots;
  bool operator==(const ParagraphBlock&) const = default;
};

struct ListItem {
  int depth = 1;  // 1 = top level
  Slot slot;
  bool operator==(const ListItem&) const = default;
};

struct BulletListBlock {
  std::vector<ListItem> items;
  bool operator==(const BulletListBlock&) const = default;
};

struct OrderedListBlock {
  std::vector<ListItem> items;
  bool operator==(const OrderedListBlock&) const = default;
};

struct TableBlock {
  std::vector<std::string> header;      // generated column labels
  std::vector<std::vector<Slot>> rows;  // every row matches header width
  bool operator==(const TableBlock&) const = default;
};

struct BlockquoteBlock {
  std::vector<Slot> slots;  // one quoted paragraph per slot
  bool operator==(const BlockquoteBlock&) const = default;
};

struct CodeFenceBlock {
  std::string info_tag;
  std::vector<Slot> lines;  // one fenced line per slot
  bool operator==(const CodeFenceBlock&) const = default;
};

struct MetadataSectionBlock {
  std::vector<std::size_t> fields;  // indices of MetadataField units
  bool operator==(const MetadataSectionBlock&) const = default;
};

using Block = std::variant<HeadingBlock, ParagraphBlock, BulletListBlock,
                           OrderedListBlock, TableBlock, BlockquoteBlock,
                           CodeFenceBlock, MetadataSectionBlock>;

// Structured document holding slots over a unit sequence of length
// source_unit_count. Invariants (see document_error):
//   - in-order traversal of unit references is strictly increasing and covers
//     every index in [0, source_unit_count) exactly once;
//   - the first heading has level 1 or 2 and later headings rise by at most
//     one level relative to the previous heading;
//   - table rows match their header width;
//   - consecutive list items deepen by at most one, starting at depth 1;
//   - padding_count equals the number of PaddingRef slots.
struct MarkdownDocument {
  std::vector<Block> blocks;
  std::size_t source_unit_count = 0;
  std::size_t padding_count = 0;

  bool operator==(const MarkdownDocument&) const = default;
};

// Unit indices referenced by the document, in traversal order (padding slots
// contribute nothing).
std::vector<std::size_t> traversal_units(const MarkdownDocument& doc);

// Empty string when every document invariant holds, else a description of the
// first violation found.
std::string document_error(const MarkdownDocument& doc);

}  // namespace mdforge
