#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdforge/dataset.hpp"
#include "mdforge/ingest.hpp"
#include "mdforge/validator.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

bool parse_difficulty_mix(const std::string& text,
                          std::array<double, 3>* mix) {
  std::stringstream stream(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(stream, part, ',')) {
    if (i >= 3) return false;
    try {
      std::size_t used = 0;
      (*mix)[i] = std::stod(part, &used);
      if (used != part.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    ++i;
  }
  return i == 3;
}

std::map<std::pair<std::size_t, std::size_t>, mdforge::DatasetEntry>
index_dataset(const std::vector<mdforge::DatasetEntry>& entries) {
  std::map<std::pair<std::size_t, std::size_t>, mdforge::DatasetEntry> index;
  for (const mdforge::DatasetEntry& entry : entries) {
    index[{entry.seed_index, entry.variant_index}] = entry;
  }
  return index;
}

int run_generate(const std::string& input_path, const std::string& out_path,
                 std::size_t variants, const std::string& mix_text,
                 double train_fraction) {
  std::array<double, 3> mix{1.0, 1.0, 1.0};
  if (!parse_difficulty_mix(mix_text, &mix)) {
    std::cerr << "error: --difficulty-mix expects three comma-separated "
                 "numbers, got '"
              << mix_text << "'\n";
    return kExitUsage;
  }
  std::ifstream in(input_path);
  if (!in) {
    std::cerr << "error: cannot open input file " << input_path << "\n";
    return kExitUsage;
  }
  mdforge::IngestResult ingested = mdforge::ingest(in);

  mdforge::GenerationOptions options;
  options.variants = variants;
  options.difficulty_mix = mix;
  options.train_fraction = train_fraction;

  mdforge::GenerationSummary summary;
  std::vector<mdforge::DatasetEntry> entries;
  try {
    entries = mdforge::generate_dataset(ingested.documents, options, &summary);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file " << out_path << "\n";
    return kExitUsage;
  }
  mdforge::write_dataset(out, entries);
  out.flush();
  if (!out) {
    std::cerr << "error: failed writing " << out_path << "\n";
    return kExitUsage;
  }

  std::cout << "wrote " << out_path << ": " << summary.entries
            << " entries (train " << summary.train << ", test " << summary.test
            << ") from " << ingested.documents.size() << " seeds ("
            << ingested.discarded << " discarded at ingest, "
            << summary.discarded_seeds << " empty after cleaning)\n";
  std::cout << "difficulty breakdown: 1=" << summary.by_difficulty[0]
            << " 2=" << summary.by_difficulty[1]
            << " 3=" << summary.by_difficulty[2] << "\n";
  return kExitOk;
}

int run_validate(const std::string& in_path,
                 const std::string& dataset_path, double threshold) {
  std::map<std::pair<std::size_t, std::size_t>, mdforge::DatasetEntry> index;
  if (!dataset_path.empty()) {
    std::ifstream ds(dataset_path);
    if (!ds) {
      std::cerr << "error: cannot open dataset file " << dataset_path << "\n";
      return kExitUsage;
    }
    try {
      index = index_dataset(mdforge::read_dataset(ds));
    } catch (const std::exception& e) {
      std::cerr << "error: " << dataset_path << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }

  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "error: cannot open input file " << in_path << "\n";
    return kExitUsage;
  }

  bool all_pass = true;
  bool any_error = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      std::cerr << "line " << line_no << ": invalid JSON record\n";
      any_error = true;
      continue;
    }

    std::string output;
    mdforge::StructuralSpec spec;
    std::optional<std::vector<mdforge::AtomicUnit>> units;
    std::optional<std::size_t> seed_index;
    std::optional<std::size_t> variant_index;

    try {
      if (record.contains("target_markdown") && record.contains("spec")) {
        mdforge::DatasetEntry entry = mdforge::entry_from_json_line(line);
        output = entry.target_markdown;
        spec = entry.spec;
        units = mdforge::derive_units(entry.seed_text);
        seed_index = entry.seed_index;
        variant_index = entry.variant_index;
      } else if (record.contains("output")) {
        output = record.at("output").get<std::string>();
        if (record.contains("spec")) {
          spec = mdforge::spec_from_json_string(record.at("spec").dump());
          if (record.contains("seed_text")) {
            units = mdforge::derive_units(
                record.at("seed_text").get<std::string>());
          }
        } else if (record.contains("seed_index") &&
                   record.contains("variant_index")) {
          if (index.empty()) {
            throw std::runtime_error(
                "record references a dataset entry but no --spec dataset was "
                "given");
          }
          seed_index = record.at("seed_index").get<std::size_t>();
          variant_index = record.at("variant_index").get<std::size_t>();
          auto it = index.find({*seed_index, *variant_index});
          if (it == index.end()) {
            throw std::runtime_error(
                "no dataset entry for seed " + std::to_string(*seed_index) +
                " variant " + std::to_string(*variant_index));
          }
          spec = it->second.spec;
          units = mdforge::derive_units(it->second.seed_text);
        } else {
          throw std::runtime_error(
              "record needs either an inline 'spec' or "
              "'seed_index'/'variant_index' plus --spec");
        }
      } else {
        throw std::runtime_error(
            "record is neither a dataset entry nor an output record");
      }
    } catch (const std::exception& e) {
      std::cerr << "line " << line_no << ": " << e.what() << "\n";
      any_error = true;
      continue;
    }

    mdforge::ValidationReport report = mdforge::validate_output(
        output, spec, units.has_value() ? &*units : nullptr);
    bool pass = report.structure >= threshold &&
                (!report.preservation.has_value() ||
                 *report.preservation >= threshold);
    all_pass = all_pass && pass;

    json out = json::parse(mdforge::report_to_json_string(report));
    out["pass"] = pass;
    if (seed_index.has_value()) out["seed_index"] = *seed_index;
    if (variant_index.has_value()) out["variant_index"] = *variant_index;
    std::cout << out.dump() << "\n";
  }

  if (any_error || !all_pass) return kExitValidation;
  return kExitOk;
}

int run_score(const std::string& candidates_path,
              const std::string& dataset_path) {
  std::ifstream ds(dataset_path);
  if (!ds) {
    std::cerr << "error: cannot open dataset file " << dataset_path << "\n";
    return kExitUsage;
  }
  std::map<std::pair<std::size_t, std::size_t>, mdforge::DatasetEntry> index;
  try {
    index = index_dataset(mdforge::read_dataset(ds));
  } catch (const std::exception& e) {
    std::cerr << "error: " << dataset_path << ": " << e.what() << "\n";
    return kExitUsage;
  }

  std::ifstream in(candidates_path);
  if (!in) {
    std::cerr << "error: cannot open candidates file " << candidates_path
              << "\n";
    return kExitUsage;
  }

  bool any_error = false;
  std::size_t scored = 0;
  double structure_sum = 0.0;
  double preservation_sum = 0.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      std::cerr << "line " << line_no << ": invalid JSON record\n";
      any_error = true;
      continue;
    }
    std::size_t seed_index = 0;
    std::size_t variant_index = 0;
    std::string output;
    try {
      seed_index = record.at("seed_index").get<std::size_t>();
      variant_index = record.at("variant_index").get<std::size_t>();
      output = record.at("output").get<std::string>();
    } catch (const json::exception& e) {
      std::cerr << "line " << line_no << ": " << e.what() << "\n";
      any_error = true;
      continue;
    }
    auto it = index.find({seed_index, variant_index});
    if (it == index.end()) {
      std::cerr << "line " << line_no << ": no dataset entry for seed "
                << seed_index << " variant " << variant_index << "\n";
      any_error = true;
      continue;
    }
    std::vector<mdforge::AtomicUnit> units =
        mdforge::derive_units(it->second.seed_text);
    mdforge::ValidationReport report =
        mdforge::validate_output(output, it->second.spec, &units);

    json out{{"seed_index", seed_index},
             {"variant_index", variant_index},
             {"structure_score", report.structure},
             {"content_preservation", *report.preservation},
             {"composite", *report.composite}};
    std::cout << out.dump() << "\n";

    ++scored;
    structure_sum += report.structure;
    preservation_sum += *report.preservation;
  }

  json final_line{{"records", scored}};
  if (scored > 0) {
    final_line["mean_structure_score"] =
        structure_sum / static_cast<double>(scored);
    final_line["mean_content_preservation"] =
        preservation_sum / static_cast<double>(scored);
  } else {
    final_line["mean_structure_score"] = nullptr;
    final_line["mean_content_preservation"] = nullptr;
  }
  std::cout << final_line.dump() << "\n";
  return any_error ? kExitValidation : kExitOk;
}

int run_stats(const std::string& dataset_path, bool as_json) {
  std::ifstream ds(dataset_path);
  if (!ds) {
    std::cerr << "error: cannot open dataset file " << dataset_path << "\n";
    return kExitUsage;
  }
  std::vector<mdforge::DatasetEntry> entries;
  try {
    entries = mdforge::read_dataset(ds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << dataset_path << ": " << e.what() << "\n";
    return kExitUsage;
  }
  mdforge::DatasetStats stats = mdforge::compute_stats(entries);
  if (as_json) {
    std::cout << mdforge::stats_to_json_string(stats) << "\n";
    return kExitOk;
  }
  std::cout << "total: " << stats.total << " (train " << stats.train
            << " / test " << stats.test << ")\n";
  auto print_hist = [](const std::string& label, const auto& hist) {
    std::cout << label << ":";
    for (const auto& [key, value] : hist) {
      std::cout << " ";
      if constexpr (std::is_same_v<std::decay_t<decltype(key)>, std::string>) {
        std::cout << key;
      } else {
        std::cout << key;
      }
      std::cout << "=" << value;
    }
    std::cout << "\n";
  };
  print_hist("difficulty", stats.by_difficulty);
  print_hist("category", stats.by_category);
  print_hist("section_count", stats.section_count_histogram);
  print_hist("blockquote_count", stats.blockquote_count_histogram);
  print_hist("list_item_count", stats.list_item_count_histogram);
  print_hist("max_list_depth", stats.max_list_depth_histogram);
  print_hist("wrap_width", stats.wrap_width_histogram);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mdforge: deterministic structured-Markdown dataset generator and "
      "validator"};
  app.require_subcommand(1);

  std::string gen_input;
  std::string gen_out;
  std::size_t gen_variants = 1;
  std::string gen_mix = "1,1,1";
  double gen_train_fraction = 0.7273;
  CLI::App* generate =
      app.add_subcommand("generate", "Build a dataset from raw seed documents");
  generate->add_option("--input", gen_input, "Seed JSONL file")->required();
  generate->add_option("--out", gen_out, "Output dataset JSONL file")
      ->required();
  generate->add_option("--variants", gen_variants,
                       "Variants per seed (default 1)");
  generate->add_option("--difficulty-mix", gen_mix,
                       "Comma-separated difficulty weights (default 1,1,1)");
  generate->add_option("--train-fraction", gen_train_fraction,
                       "Fraction of entries assigned to train (default 0.7273)");

  std::string val_in;
  std::string val_spec;
  double val_threshold = 1.0;
  CLI::App* validate =
      app.add_subcommand("validate", "Validate Markdown outputs against specs");
  validate->add_option("--in", val_in, "JSONL records to validate")->required();
  validate->add_option("--spec", val_spec,
                       "Dataset JSONL for records referencing entries");
  validate->add_option("--threshold", val_threshold,
                       "Minimum passing score (default 1.0)");

  std::string score_candidates;
  std::string score_dataset;
  CLI::App* score =
      app.add_subcommand("score", "Score candidate outputs against a dataset");
  score->add_option("--candidates", score_candidates, "Candidate JSONL file")
      ->required();
  score->add_option("--dataset", score_dataset, "Dataset JSONL file")
      ->required();

  std::string stats_dataset;
  bool stats_json = false;
  CLI::App* stats =
      app.add_subcommand("stats", "Summarize a dataset's spec distributions");
  stats->add_option("--dataset", stats_dataset, "Dataset JSONL file")
      ->required();
  stats->add_flag("--json", stats_json, "Emit machine-readable JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      return run_generate(gen_input, gen_out, gen_variants, gen_mix,
                          gen_train_fraction);
    }
    if (validate->parsed()) {
      return run_validate(val_in, val_spec, val_threshold);
    }
    if (score->parsed()) {
      return run_score(score_candidates, score_dataset);
    }
    if (stats->parsed()) {
      return run_stats(stats_dataset, stats_json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
