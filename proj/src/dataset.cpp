#include "mdforge/dataset.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mdforge/sampler.hpp"
#include "mdforge/synthesizer.hpp"
#include "mdforge/validator.hpp"

namespace mdforge {
namespace {

using nlohmann::json;

json spec_to_json(const StructuralSpec& spec) {
  json allowed = json::array();
  for (BlockType type : kAllBlockTypes) {
    if (spec.allowed_blocks.count(type) > 0)
      allowed.push_back(block_type_name(type));
  }
  json j{{"seed_index", spec.seed_index},
         {"variant_index", spec.variant_index},
         {"difficulty", spec.difficulty},
         {"section_count", spec.section_count},
         {"max_list_depth", spec.max_list_depth},
         {"list_item_count", spec.list_item_count},
         {"blockquote_count", spec.blockquote_count},
         {"allowed_blocks", allowed},
         {"validator_version", spec.validator_version}};
  if (spec.wrap_width.has_value()) {
    j["wrap_width"] = *spec.wrap_width;
  } else {
    j["wrap_width"] = nullptr;
  }
  return j;
}

StructuralSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("spec must be a JSON object");
  StructuralSpec spec;
  spec.seed_index = j.at("seed_index").get<std::size_t>();
  spec.variant_index = j.at("variant_index").get<std::size_t>();
  spec.difficulty = j.at("difficulty").get<int>();
  spec.section_count = j.at("section_count").get<int>();
  spec.max_list_depth = j.at("max_list_depth").get<int>();
  spec.list_item_count = j.at("list_item_count").get<int>();
  spec.blockquote_count = j.at("blockquote_count").get<int>();
  spec.allowed_blocks.clear();
  for (const json& name : j.at("allowed_blocks")) {
    std::string text = name.get<std::string>();
    std::optional<BlockType> type = block_type_from_name(text);
    if (!type.has_value()) {
      throw std::runtime_error("unknown block type: " + text);
    }
    spec.allowed_blocks.insert(*type);
  }
  const json& wrap = j.at("wrap_width");
  if (wrap.is_null()) {
    spec.wrap_width.reset();
  } else {
    spec.wrap_width = wrap.get<int>();
  }
  spec.validator_version = j.at("validator_version").get<std::string>();
  return spec;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("MDFORGE_WORKERS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed > 0) hw = static_cast<std::size_t>(parsed);
  }
  return std::min({hw, jobs, static_cast<std::size_t>(64)});
}

// Applies fn to every index in [0, jobs); results land at their own index.
template <typename Out, typename Fn>
std::vector<Out> parallel_map_ordered(std::size_t jobs, Fn fn) {
  std::vector<Out> results(jobs);
  if (jobs == 0) return results;
  std::size_t workers = worker_count(jobs);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(jobs);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace

std::string spec_to_json_string(const StructuralSpec& spec) {
  return spec_to_json(spec).dump();
}

StructuralSpec spec_from_json_string(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("invalid spec JSON");
  try {
    return spec_from_json(j);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("invalid spec JSON: ") + e.what());
  }
}

std::string entry_to_json_line(const DatasetEntry& entry) {
  json j{{"seed_index", entry.seed_index},
         {"variant_index", entry.variant_index},
         {"category", entry.category},
         {"difficulty", entry.difficulty},
         {"split", entry.split},
         {"seed_text", entry.seed_text},
         {"instruction_prompt", entry.instruction_prompt},
         {"target_markdown", entry.target_markdown},
         {"spec", spec_to_json(entry.spec)},
         {"validator_id", entry.validator_id}};
  return j.dump();
}

DatasetEntry entry_from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("malformed dataset entry");
  }
  try {
    DatasetEntry entry;
    entry.seed_index = j.at("seed_index").get<std::size_t>();
    entry.variant_index = j.at("variant_index").get<std::size_t>();
    entry.category = j.at("category").get<std::string>();
    entry.difficulty = j.at("difficulty").get<int>();
    entry.split = j.at("split").get<std::string>();
    entry.seed_text = j.at("seed_text").get<std::string>();
    entry.instruction_prompt = j.at("instruction_prompt").get<std::string>();
    entry.target_markdown = j.at("target_markdown").get<std::string>();
    entry.spec = spec_from_json(j.at("spec"));
    entry.validator_id = j.at("validator_id").get<std::string>();
    if (entry.split != "train" && entry.split != "test") {
      throw std::runtime_error("split must be 'train' or 'test'");
    }
    return entry;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed dataset entry: ") +
                             e.what());
  }
}

std::vector<AtomicUnit> derive_units(const std::string& raw_text) {
  std::optional<std::string> cleaned = clean(raw_text);
  if (!cleaned.has_value()) {
    throw std::invalid_argument("seed text cleans to nothing");
  }
  return segment(*cleaned);
}

bool is_test_split(std::size_t seed_index, std::size_t variant_index,
                   double train_fraction) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0)) {
    throw std::invalid_argument("train_fraction must lie in [0, 1]");
  }
  std::uint64_t threshold = static_cast<std::uint64_t>(
      std::llround(10000.0 * (1.0 - train_fraction)));
  std::uint64_t roll =
      draw64(DrawKey{seed_index, variant_index, 0, kTagSplit}) % 10000;
  return roll < threshold;
}

int pick_difficulty(std::size_t seed_index, std::size_t variant_index,
                    const std::array<double, 3>& mix) {
  double total = 0.0;
  for (double w : mix) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("difficulty weights must be non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("difficulty weights must sum to a positive value");
  }
  std::uint64_t t1 =
      static_cast<std::uint64_t>(std::llround(10000.0 * mix[0] / total));
  std::uint64_t t2 = static_cast<std::uint64_t>(
      std::llround(10000.0 * (mix[0] + mix[1]) / total));
  std::uint64_t roll =
      draw64(DrawKey{seed_index, variant_index, 0, kTagDifficulty}) % 10000;
  if (roll < t1) return 1;
  if (roll < t2) return 2;
  return 3;
}

std::vector<DatasetEntry> generate_dataset(
    const std::vector<SeedDocument>& seeds, const GenerationOptions& options,
    GenerationSummary* summary) {
  if (options.variants == 0) {
    throw std::invalid_argument("variants must be at least 1");
  }
  // Validate shared knobs once up front.
  (void)is_test_split(0, 0, options.train_fraction);
  (void)pick_difficulty(0, 0, options.difficulty_mix);

  struct Job {
    const SeedDocument* seed = nullptr;
    std::size_t variant = 0;
  };
  std::vector<Job> jobs;
  std::size_t discarded = 0;
  for (const SeedDocument& seed : seeds) {
    if (!clean(seed.text).has_value()) {
      ++discarded;
      continue;
    }
    for (std::size_t v = 0; v < options.variants; ++v) {
      jobs.push_back(Job{&seed, v});
    }
  }

  auto build = [&](std::size_t i) -> DatasetEntry {
    const Job& job = jobs[i];
    const SeedDocument& seed = *job.seed;
    std::vector<AtomicUnit> units = derive_units(seed.text);
    int difficulty =
        pick_difficulty(seed.id, job.variant, options.difficulty_mix);
    StructuralSpec spec = sample_spec(seed.id, job.variant, difficulty);

    DatasetEntry entry;
    entry.seed_index = seed.id;
    entry.variant_index = job.variant;
    entry.category = seed.category;
    entry.difficulty = difficulty;
    entry.split = is_test_split(seed.id, job.variant, options.train_fraction)
                      ? "test"
                      : "train";
    entry.seed_text = seed.text;
    entry.instruction_prompt = render_prompt(spec);
    MarkdownDocument doc = synthesize(units, spec);
    entry.target_markdown = render_markdown(doc, units, spec);
    entry.spec = spec;
    entry.validator_id = spec.validator_version;

    // Every emitted target must be perfect against its own spec; anything
    // less is a generator bug, not a data point.
    ValidationReport report =
        validate_output(entry.target_markdown, spec, &units);
    bool round_trip = structurally_equal(parse_markdown(entry.target_markdown),
                                         projected_parse(doc, units));
    if (report.structure != 1.0 || !report.preservation.has_value() ||
        *report.preservation != 1.0 || !round_trip) {
      std::string detail;
      for (const CheckResult& check : report.checks) {
        if (check.score < 1.0) {
          detail += " " + check.name + "=" + std::to_string(check.score);
        }
      }
      if (!round_trip) detail += " round-trip=failed";
      if (report.preservation.has_value() && *report.preservation != 1.0) {
        detail += " preservation=" + std::to_string(*report.preservation);
      }
      throw std::runtime_error(
          "self-validation failed for seed " + std::to_string(seed.id) +
          " variant " + std::to_string(job.variant) + ":" + detail);
    }
    return entry;
  };

  std::vector<DatasetEntry> entries =
      parallel_map_ordered<DatasetEntry>(jobs.size(), build);

  if (summary != nullptr) {
    *summary = GenerationSummary{};
    summary->entries = entries.size();
    summary->discarded_seeds = discarded;
    for (const DatasetEntry& entry : entries) {
      if (entry.split == "test") {
        ++summary->test;
      } else {
        ++summary->train;
      }
      if (entry.difficulty >= 1 && entry.difficulty <= 3) {
        ++summary->by_difficulty[static_cast<std::size_t>(entry.difficulty - 1)];
      }
    }
  }
  return entries;
}

std::vector<DatasetEntry> read_dataset(std::istream& in) {
  std::vector<DatasetEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      entries.push_back(entry_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return entries;
}

void write_dataset(std::ostream& out,
                   const std::vector<DatasetEntry>& entries) {
  for (const DatasetEntry& entry : entries) {
    out << entry_to_json_line(entry) << '\n';
  }
}

DatasetStats compute_stats(const std::vector<DatasetEntry>& entries) {
  DatasetStats stats;
  stats.total = entries.size();
  for (const DatasetEntry& entry : entries) {
    if (entry.split == "test") {
      ++stats.test;
    } else {
      ++stats.train;
    }
    ++stats.by_difficulty[entry.difficulty];
    ++stats.by_category[entry.category];
    ++stats.section_count_histogram[entry.spec.section_count];
    ++stats.blockquote_count_histogram[entry.spec.blockquote_count];
    ++stats.list_item_count_histogram[entry.spec.list_item_count];
    ++stats.max_list_depth_histogram[entry.spec.max_list_depth];
    if (entry.spec.wrap_width.has_value()) {
      ++stats.wrap_width_histogram[std::to_string(*entry.spec.wrap_width)];
    } else {
      ++stats.wrap_width_histogram["none"];
    }
  }
  return stats;
}

namespace {

template <typename K>
json histogram_json(const std::map<K, std::size_t>& hist) {
  json j = json::object();
  for (const auto& [key, value] : hist) {
    if constexpr (std::is_same_v<K, std::string>) {
      j[key] = value;
    } else {
      j[std::to_string(key)] = value;
    }
  }
  return j;
}

}  // namespace

std::string stats_to_json_string(const DatasetStats& stats) {
  json j{{"total", stats.total},
         {"train", stats.train},
         {"test", stats.test},
         {"by_difficulty", histogram_json(stats.by_difficulty)},
         {"by_category", histogram_json(stats.by_category)},
         {"section_count_histogram",
          histogram_json(stats.section_count_histogram)},
         {"blockquote_count_histogram",
          histogram_json(stats.blockquote_count_histogram)},
         {"list_item_count_histogram",
          histogram_json(stats.list_item_count_histogram)},
         {"max_list_depth_histogram",
          histogram_json(stats.max_list_depth_histogram)},
         {"wrap_width_histogram", histogram_json(stats.wrap_width_histogram)}};
  return j.dump();
}

}  // namespace mdforge
