#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mdforge/core.hpp"

namespace mdforge {

// Version tag of the spec sampling parameters (ranges, tags, difficulty
// tiers). Bump when any of them change.
inline constexpr const char* kSamplerVersion = "mdforge-sampler-1";

// Field tags used by the spec sampler, one per sampled field.
inline constexpr const char* kTagSections = "sections";
inline constexpr const char* kTagDepth = "depth";
inline constexpr const char* kTagItems = "items";
inline constexpr const char* kTagQuotes = "quotes";
inline constexpr const char* kTagWrap = "wrap";
// Dataset-level tags drawn through the same generator.
inline constexpr const char* kTagSplit = "split";
inline constexpr const char* kTagDifficulty = "difficulty";

inline constexpr const char* kAllDrawTags[] = {
    kTagSections, kTagDepth, kTagItems, kTagQuotes,
    kTagWrap,     kTagSplit, kTagDifficulty};

// Identifies one pseudo-random draw. Equal keys always produce equal values;
// the draw consumes no mutable state.
struct DrawKey {
  std::uint64_t seed_index = 0;
  std::uint64_t variant_index = 0;
  std::uint64_t draw_counter = 0;
  std::string field_tag;

  bool operator==(const DrawKey&) const = default;
};

std::uint64_t fnv1a64(std::string_view data);

// Stateless keyed draw: mixes the key fields into a 64-bit state and applies
// a SplitMix64-style finalizer.
std::uint64_t draw64(const DrawKey& key);

// Uniform draw on the inclusive range [lo, hi]. Requires lo <= hi.
std::int64_t draw_range(const DrawKey& key, std::int64_t lo, std::int64_t hi);

// Samples the full structural contract for (seed_index, variant_index) at the
// given difficulty (1..3). Pure function of its arguments.
StructuralSpec sample_spec(std::size_t seed_index, std::size_t variant_index,
                           int difficulty);

}  // namespace mdforge
