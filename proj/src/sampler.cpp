#include "mdforge/sampler.hpp"

#include <stdexcept>

namespace mdforge {

namespace {

constexpr std::uint64_t kSeedMult = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kVariantMult = 0xBF58476D1CE4E5B9ull;
constexpr std::uint64_t kFinalMult1 = 0xBF58476D1CE4E5B9ull;
constexpr std::uint64_t kFinalMult2 = 0x94D049BB133111EBull;
constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ull;
constexpr std::uint64_t kFnvPrime = 0x00000100000001B3ull;

constexpr std::uint64_t rotl64(std::uint64_t x, int r) {
  return (x << r) | (x >> (64 - r));
}

struct Range {
  int lo;
  int hi;
};

// Difficulty-tier ranges, indexed by difficulty - 1.
constexpr Range kSectionRange[] = {{3, 5}, {4, 6}, {5, 7}};
constexpr Range kDepthRange[] = {{1, 2}, {2, 3}, {3, 4}};
constexpr Range kItemRange[] = {{2, 4}, {3, 6}, {4, 8}};
constexpr Range kQuoteRange[] = {{0, 2}, {1, 3}, {2, 4}};

int draw_field(std::size_t seed_index, std::size_t variant_index,
               const char* tag, const Range& range) {
  DrawKey key{seed_index, variant_index, 0, tag};
  return static_cast<int>(draw_range(key, range.lo, range.hi));
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t draw64(const DrawKey& key) {
  std::uint64_t s = key.seed_index * kSeedMult;
  s ^= rotl64(key.variant_index * kVariantMult, 17);
  s ^= key.draw_counter;
  s ^= fnv1a64(key.field_tag);

  std::uint64_t z = s;
  z ^= z >> 30;
  z *= kFinalMult1;
  z ^= z >> 27;
  z *= kFinalMult2;
  z ^= z >> 31;
  return z;
}

std::int64_t draw_range(const DrawKey& key, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("draw_range: lo exceeds hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(draw64(key) % span);
}

StructuralSpec sample_spec(std::size_t seed_index, std::size_t variant_index,
                           int difficulty) {
  if (difficulty < 1 || difficulty > 3) {
    throw std::invalid_argument("sample_spec: difficulty must be 1..3");
  }
  const int tier = difficulty - 1;

  StructuralSpec spec;
  spec.seed_index = seed_index;
  spec.variant_index = variant_index;
  spec.difficulty = difficulty;
  spec.section_count = draw_field(seed_index, variant_index, kTagSections, kSectionRange[tier]);
  spec.max_list_depth = draw_field(seed_index, variant_index, kTagDepth, kDepthRange[tier]);
  spec.list_item_count = draw_field(seed_index, variant_index, kTagItems, kItemRange[tier]);
  spec.blockquote_count = draw_field(seed_index, variant_index, kTagQuotes, kQuoteRange[tier]);

  spec.allowed_blocks = {BlockType::BulletList, BlockType::Blockquote};
  if (difficulty >= 2) {
    spec.allowed_blocks.insert(BlockType::Table);
    spec.allowed_blocks.insert(BlockType::OrderedList);
  }
  if (difficulty >= 3) {
    spec.allowed_blocks.insert(BlockType::CodeFence);
  }

  if (difficulty == 2) {
    spec.wrap_width = 100;
  } else if (difficulty == 3) {
    spec.wrap_width = 80;
  }

  spec.validator_version = kValidatorVersion;
  return spec;
}

}  // namespace mdforge
