#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mdforge/core.hpp"
#include "mdforge/ingest.hpp"

namespace mdforge {

struct DatasetEntry {
  std::size_t seed_index = 0;
  std::size_t variant_index = 0;
  std::string category;
  int difficulty = 1;
  std::string split;  // "train" or "test"
  std::string seed_text;
  std::string instruction_prompt;
  std::string target_markdown;
  StructuralSpec spec;
  std::string validator_id;
  bool operator==(const DatasetEntry&) const = default;
};

// Single-line JSON with lexicographically sorted keys; byte-stable for
// identical entries.
std::string entry_to_json_line(const DatasetEntry& entry);

// Throws std::runtime_error on malformed input.
DatasetEntry entry_from_json_line(const std::string& line);

std::string spec_to_json_string(const StructuralSpec& spec);
StructuralSpec spec_from_json_string(const std::string& text);

// Derives the atomic units the generator extracted from a raw seed text.
// Throws std::invalid_argument when the text cleans to nothing.
std::vector<AtomicUnit> derive_units(const std::string& raw_text);

// Deterministic split assignment, stable per (seed, variant) and independent
// of corpus composition. train_fraction must lie in [0, 1].
bool is_test_split(std::size_t seed_index, std::size_t variant_index,
                   double train_fraction);

// Deterministic difficulty assignment weighted by mix (non-negative weights,
// positive sum).
int pick_difficulty(std::size_t seed_index, std::size_t variant_index,
                    const std::array<double, 3>& mix);

struct GenerationOptions {
  std::size_t variants = 1;
  std::array<double, 3> difficulty_mix{1.0, 1.0, 1.0};
  double train_fraction = 0.7273;
};

struct GenerationSummary {
  std::size_t entries = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t discarded_seeds = 0;
  std::array<std::size_t, 3> by_difficulty{0, 0, 0};
};

// Builds one entry per (seed, variant), self-validating every target; a
// target that does not score perfectly against its own spec aborts
// generation with std::runtime_error. Seeds whose text cleans to nothing are
// skipped and counted. Work fans out across a worker pool (bounded by the
// MDFORGE_WORKERS environment variable when set); output order is
// seed-major, variant-minor regardless of scheduling.
std::vector<DatasetEntry> generate_dataset(
    const std::vector<SeedDocument>& seeds, const GenerationOptions& options,
    GenerationSummary* summary = nullptr);

std::vector<DatasetEntry> read_dataset(std::istream& in);
void write_dataset(std::ostream& out, const std::vector<DatasetEntry>& entries);

struct DatasetStats {
  std::size_t total = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  std::map<int, std::size_t> by_difficulty;
  std::map<std::string, std::size_t> by_category;
  std::map<int, std::size_t> section_count_histogram;
  std::map<int, std::size_t> blockquote_count_histogram;
  std::map<int, std::size_t> list_item_count_histogram;
  std::map<int, std::size_t> max_list_depth_histogram;
  std::map<std::string, std::size_t> wrap_width_histogram;  // "none" or width
};

DatasetStats compute_stats(const std::vector<DatasetEntry>& entries);
std::string stats_to_json_string(const DatasetStats& stats);

}  // namespace mdforge
