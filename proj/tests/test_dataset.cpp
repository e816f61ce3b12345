#include <doctest.h>

#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdforge/dataset.hpp"
#include "mdforge/sampler.hpp"
#include "mdforge/validator.hpp"
#include "support/test_support.hpp"

using namespace mdforge;
using mdforge::test::make_seed_corpus;

namespace {

DatasetEntry sample_entry() {
  DatasetEntry entry;
  entry.seed_index = 7;
  entry.variant_index = 1;
  entry.category = "technical";
  entry.difficulty = 2;
  entry.split = "train";
  entry.seed_text = "Raw seed text. With two sentences.";
  entry.instruction_prompt = "Prompt body\nwith a newline.";
  entry.target_markdown = "## Section 1\n\nBody.\n";
  entry.spec = sample_spec(7, 1, 2);
  entry.validator_id = kValidatorVersion;
  return entry;
}

}  // namespace

TEST_CASE("entry JSON round-trips byte-stably") {
  const DatasetEntry entry = sample_entry();
  const std::string line = entry_to_json_line(entry);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(entry_to_json_line(entry) == line);  // byte-stable
  const DatasetEntry back = entry_from_json_line(line);
  CHECK(back == entry);
  CHECK(entry_to_json_line(back) == line);
}

TEST_CASE("entry JSON uses the documented field names") {
  const std::string line = entry_to_json_line(sample_entry());
  for (const char* key :
       {"\"category\"", "\"difficulty\"", "\"instruction_prompt\"",
        "\"seed_index\"", "\"seed_text\"", "\"spec\"", "\"split\"",
        "\"target_markdown\"", "\"validator_id\"", "\"variant_index\""}) {
    CAPTURE(key);
    CHECK(line.find(key) != std::string::npos);
  }
}

TEST_CASE("entry_from_json_line rejects malformed input") {
  CHECK_THROWS_AS(entry_from_json_line("not json"), std::runtime_error);
  CHECK_THROWS_AS(entry_from_json_line("[]"), std::runtime_error);
  CHECK_THROWS_AS(entry_from_json_line("{}"), std::runtime_error);
  // Bad split value.
  std::string line = entry_to_json_line(sample_entry());
  const std::string key = "\"split\":\"train\"";
  std::size_t pos = line.find(key);
  REQUIRE(pos != std::string::npos);
  line.replace(pos, key.size(), "\"split\":\"dev\"");
  CHECK_THROWS_AS(entry_from_json_line(line), std::runtime_error);
}

TEST_CASE("spec JSON round-trips wrap width and allowed blocks") {
  for (int difficulty = 1; difficulty <= 3; ++difficulty) {
    const StructuralSpec spec = sample_spec(3, 0, difficulty);
    const StructuralSpec back = spec_from_json_string(spec_to_json_string(spec));
    CHECK(back == spec);
  }
  const std::string d1 = spec_to_json_string(sample_spec(3, 0, 1));
  CHECK(d1.find("\"wrap_width\":null") != std::string::npos);
  CHECK(d1.find("\"BulletList\"") != std::string::npos);
  CHECK(d1.find("\"Blockquote\"") != std::string::npos);
  const std::string d3 = spec_to_json_string(sample_spec(3, 0, 3));
  CHECK(d3.find("\"wrap_width\":80") != std::string::npos);
  CHECK(d3.find("\"CodeFence\"") != std::string::npos);
}

TEST_CASE("derive_units rejects text that cleans to nothing") {
  CHECK_THROWS_AS(derive_units(" \t \x01 "), std::invalid_argument);
  const std::vector<AtomicUnit> units = derive_units("One. Two.");
  CHECK(units.size() == 2);
}

TEST_CASE("is_test_split is deterministic and respects the bounds") {
  CHECK(is_test_split(3, 1, 0.7273) == is_test_split(3, 1, 0.7273));
  for (std::size_t seed = 0; seed < 50; ++seed) {
    CHECK(is_test_split(seed, 0, 0.0));        // everything is test
    CHECK_FALSE(is_test_split(seed, 0, 1.0));  // everything is train
  }
  CHECK_THROWS_AS(is_test_split(0, 0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(is_test_split(0, 0, 1.5), std::invalid_argument);

  std::size_t test_count = 0;
  const std::size_t n = 1100;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (is_test_split(seed, 0, 0.7273)) ++test_count;
  }
  // Expected share is 1 - 0.7273; allow generous sampling noise.
  CHECK(test_count > n / 5);
  CHECK(test_count < n / 3);
}

TEST_CASE("pick_difficulty follows the mix weights") {
  for (std::size_t seed = 0; seed < 40; ++seed) {
    CHECK(pick_difficulty(seed, 0, {1.0, 0.0, 0.0}) == 1);
    CHECK(pick_difficulty(seed, 0, {0.0, 1.0, 0.0}) == 2);
    CHECK(pick_difficulty(seed, 0, {0.0, 0.0, 1.0}) == 3);
  }
  std::array<std::size_t, 3> counts{0, 0, 0};
  const std::size_t n = 1200;
  for (std::size_t seed = 0; seed < n; ++seed) {
    int d = pick_difficulty(seed, 0, {1.0, 1.0, 1.0});
    REQUIRE(d >= 1);
    REQUIRE(d <= 3);
    counts[static_cast<std::size_t>(d - 1)]++;
  }
  for (std::size_t c : counts) {
    CHECK(c > n / 3 - n / 10);
    CHECK(c < n / 3 + n / 10);
  }
  CHECK_THROWS_AS(pick_difficulty(0, 0, {0.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(pick_difficulty(0, 0, {1.0, -1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("generate_dataset emits ordered, self-consistent entries") {
  const std::vector<SeedDocument> seeds = make_seed_corpus(30);
  GenerationOptions options;
  options.variants = 2;
  GenerationSummary summary;
  const std::vector<DatasetEntry> entries =
      generate_dataset(seeds, options, &summary);

  CHECK(summary.discarded_seeds == 0);
  CHECK(entries.size() == seeds.size() * 2);
  CHECK(summary.entries == entries.size());
  CHECK(summary.train + summary.test == summary.entries);
  CHECK(summary.by_difficulty[0] + summary.by_difficulty[1] +
            summary.by_difficulty[2] ==
        summary.entries);

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const DatasetEntry& entry = entries[i];
    CHECK(entry.seed_index == i / 2);
    CHECK(entry.variant_index == i % 2);
    CHECK(entry.category == seeds[entry.seed_index].category);
    CHECK(entry.validator_id == kValidatorVersion);
    CHECK(entry.spec.seed_index == entry.seed_index);
    CHECK(entry.spec.variant_index == entry.variant_index);
    CHECK(entry.spec.difficulty == entry.difficulty);
    CHECK((entry.split == "train" || entry.split == "test"));
    CHECK_FALSE(entry.instruction_prompt.empty());
    CHECK_FALSE(entry.target_markdown.empty());
  }
}

TEST_CASE("generate_dataset targets score perfectly against their specs") {
  const std::vector<SeedDocument> seeds = make_seed_corpus(12);
  const std::vector<DatasetEntry> entries =
      generate_dataset(seeds, GenerationOptions{});
  REQUIRE(entries.size() == seeds.size());
  for (const DatasetEntry& entry : entries) {
    const std::vector<AtomicUnit> units = derive_units(entry.seed_text);
    const ValidationReport report =
        validate_output(entry.target_markdown, entry.spec, &units);
    CAPTURE(entry.seed_index);
    CHECK(report.structure == 1.0);
    REQUIRE(report.preservation.has_value());
    CHECK(*report.preservation == 1.0);
  }
}

TEST_CASE("generate_dataset is deterministic across runs and worker counts") {
  const std::vector<SeedDocument> seeds = make_seed_corpus(24);
  GenerationOptions options;
  options.variants = 2;
  const std::vector<DatasetEntry> first = generate_dataset(seeds, options);
  const std::vector<DatasetEntry> second = generate_dataset(seeds, options);
  REQUIRE(first.size() == second.size());
  CHECK(first == second);

  setenv("MDFORGE_WORKERS", "1", 1);
  const std::vector<DatasetEntry> serial = generate_dataset(seeds, options);
  unsetenv("MDFORGE_WORKERS");
  CHECK(serial == first);
}

TEST_CASE("generate_dataset skips seeds that clean to nothing") {
  std::vector<SeedDocument> seeds = make_seed_corpus(4);
  seeds.push_back({4, "reference", " \t "});
  GenerationSummary summary;
  const std::vector<DatasetEntry> entries =
      generate_dataset(seeds, GenerationOptions{}, &summary);
  CHECK(entries.size() == 4);
  CHECK(summary.discarded_seeds == 1);
}

TEST_CASE("dataset files round-trip through write and read") {
  const std::vector<SeedDocument> seeds = make_seed_corpus(6);
  const std::vector<DatasetEntry> entries =
      generate_dataset(seeds, GenerationOptions{});
  std::stringstream io;
  write_dataset(io, entries);
  const std::vector<DatasetEntry> back = read_dataset(io);
  CHECK(back == entries);
}

TEST_CASE("read_dataset reports the offending line number") {
  std::stringstream io;
  io << entry_to_json_line(sample_entry()) << "\n";
  io << "garbage\n";
  try {
    read_dataset(io);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("read_dataset skips blank lines") {
  std::stringstream io;
  io << "\n" << entry_to_json_line(sample_entry()) << "\n\n";
  CHECK(read_dataset(io).size() == 1);
}

TEST_CASE("compute_stats aggregates splits, difficulties, and spec fields") {
  const std::vector<SeedDocument> seeds = make_seed_corpus(30);
  const std::vector<DatasetEntry> entries =
      generate_dataset(seeds, GenerationOptions{});
  const DatasetStats stats = compute_stats(entries);
  CHECK(stats.total == entries.size());
  CHECK(stats.train + stats.test == stats.total);

  std::size_t by_difficulty = 0;
  for (const auto& [d, n] : stats.by_difficulty) {
    CHECK(d >= 1);
    CHECK(d <= 3);
    by_difficulty += n;
  }
  CHECK(by_difficulty == stats.total);

  std::size_t sections = 0;
  for (const auto& [value, n] : stats.section_count_histogram) {
    CHECK(value >= 3);
    CHECK(value <= 7);
    sections += n;
  }
  CHECK(sections == stats.total);

  std::size_t wraps = 0;
  for (const auto& [key, n] : stats.wrap_width_histogram) {
    CHECK((key == "none" || key == "80" || key == "100"));
    wraps += n;
  }
  CHECK(wraps == stats.total);

  const std::string json = stats_to_json_string(stats);
  CHECK(json.find("\"total\"") != std::string::npos);
  CHECK(json.find("\"by_difficulty\"") != std::string::npos);
  CHECK(json.find("\"section_count_histogram\"") != std::string::npos);
}
