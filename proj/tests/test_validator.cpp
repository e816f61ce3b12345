#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mdforge/core.hpp"
#include "mdforge/ingest.hpp"
#include "mdforge/sampler.hpp"
#include "mdforge/synthesizer.hpp"
#include "mdforge/validator.hpp"
#include "support/test_support.hpp"

using namespace mdforge;
using mdforge::test::lcs_brute_force;
using mdforge::test::make_seed_corpus;

namespace {

const CheckResult& find_check(const std::vector<CheckResult>& checks,
                              const std::string& name) {
  for (const CheckResult& check : checks) {
    if (check.name == name) return check;
  }
  REQUIRE_MESSAGE(false, "missing check: " << name);
  static CheckResult dummy;
  return dummy;
}

StructuralSpec loose_spec() {
  StructuralSpec spec;
  spec.section_count = 1;
  spec.max_list_depth = 4;
  spec.list_item_count = 2;
  spec.blockquote_count = 0;
  spec.allowed_blocks = {BlockType::BulletList, BlockType::OrderedList,
                         BlockType::Table, BlockType::Blockquote,
                         BlockType::CodeFence};
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------
// parse_markdown
// ---------------------------------------------------------------------------

TEST_CASE("parse_markdown reads headings and paragraphs") {
  const ParsedDocument doc = parse_markdown("## Title\n\nOne two.\nThree.\n");
  REQUIRE(doc.blocks.size() == 2);
  CHECK(std::get<ParsedHeading>(doc.blocks[0]) == ParsedHeading{2, "Title", 1});
  CHECK(std::get<ParsedParagraph>(doc.blocks[1]) ==
        ParsedParagraph{{"One two.", "Three."}, 3});
}

TEST_CASE("parse_markdown removes line-start escapes from prose") {
  const ParsedDocument doc = parse_markdown("\\- not a list\n\\## not a heading\n");
  REQUIRE(doc.blocks.size() == 1);
  CHECK(std::get<ParsedParagraph>(doc.blocks[0]).lines ==
        std::vector<std::string>{"- not a list", "## not a heading"});
  CHECK(doc.lines[0].cls == LineClass::Paragraph);
}

TEST_CASE("parse_markdown reads bullet lists with nesting and continuations") {
  const ParsedDocument doc = parse_markdown(
      "- alpha\n"
      "  - beta\n"
      "continued here\n"
      "- gamma\n");
  REQUIRE(doc.blocks.size() == 1);
  const auto& list = std::get<ParsedBulletList>(doc.blocks[0]);
  REQUIRE(list.items.size() == 3);
  CHECK(list.items[0] == ParsedItem{1, "alpha", 1});
  CHECK(list.items[1] == ParsedItem{2, "beta continued here", 2});
  CHECK(list.items[2] == ParsedItem{1, "gamma", 4});
  CHECK(doc.lines[2].cls == LineClass::ListItem);  // continuation line
}

TEST_CASE("parse_markdown reads ordered lists with dot and paren markers") {
  const ParsedDocument doc = parse_markdown("1. first\n2) second\n");
  REQUIRE(doc.blocks.size() == 1);
  const auto& list = std::get<ParsedOrderedList>(doc.blocks[0]);
  REQUIRE(list.items.size() == 2);
  CHECK(list.items[0].text == "first");
  CHECK(list.items[1].text == "second");
}

TEST_CASE("parse_markdown limits ordered markers to nine digits") {
  const ParsedDocument doc = parse_markdown("1234567890. not a list\n");
  REQUIRE(doc.blocks.size() == 1);
  CHECK(std::holds_alternative<ParsedParagraph>(doc.blocks[0]));
}

TEST_CASE("parse_markdown derives item depth from indentation") {
  const ParsedDocument doc = parse_markdown("- a\n   - three spaces\n");
  const auto& list = std::get<ParsedBulletList>(doc.blocks[0]);
  REQUIRE(list.items.size() == 2);
  CHECK(list.items[0].depth == 1);
  CHECK(list.items[1].depth == 2);  // 3 spaces / 2 per level + 1
}

TEST_CASE("parse_markdown separates lists at blank lines") {
  const ParsedDocument doc = parse_markdown("- a\n\n- b\n");
  REQUIRE(doc.blocks.size() == 2);
  CHECK(std::holds_alternative<ParsedBulletList>(doc.blocks[0]));
  CHECK(std::holds_alternative<ParsedBulletList>(doc.blocks[1]));
}

TEST_CASE("parse_markdown reads tables with separator detection") {
  const ParsedDocument with = parse_markdown(
      "| Item | Description |\n"
      "| --- | --- |\n"
      "| a | b |\n");
  REQUIRE(with.blocks.size() == 1);
  const auto& table = std::get<ParsedTable>(with.blocks[0]);
  CHECK(table.header == std::vector<std::string>{"Item", "Description"});
  CHECK(table.has_separator);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0] == std::vector<std::string>{"a", "b"});

  const ParsedDocument without = parse_markdown("| a | b |\n| c | d |\n");
  const auto& bare = std::get<ParsedTable>(without.blocks[0]);
  CHECK_FALSE(bare.has_separator);
  REQUIRE(bare.rows.size() == 1);
  CHECK(bare.rows[0] == std::vector<std::string>{"c", "d"});
}

TEST_CASE("parse_markdown honors escaped pipes inside cells") {
  const ParsedDocument doc = parse_markdown(
      "| a\\|b | c\\\\d |\n"
      "| --- | --- |\n"
      "| x | y |\n");
  const auto& table = std::get<ParsedTable>(doc.blocks[0]);
  CHECK(table.header == std::vector<std::string>{"a|b", "c\\d"});
}

TEST_CASE("parse_markdown accepts alignment colons in separators") {
  const ParsedDocument doc = parse_markdown(
      "| a | b |\n"
      "| :--- | ---: |\n"
      "| x | y |\n");
  CHECK(std::get<ParsedTable>(doc.blocks[0]).has_separator);
}

TEST_CASE("parse_markdown groups quote lines into paragraphs") {
  const ParsedDocument doc = parse_markdown(
      "> first part\n"
      "> still first\n"
      ">\n"
      "> second\n");
  REQUIRE(doc.blocks.size() == 1);
  const auto& quote = std::get<ParsedBlockquote>(doc.blocks[0]);
  CHECK(quote.paragraphs ==
        std::vector<std::string>{"first part still first", "second"});
  CHECK(doc.lines[2].cls == LineClass::Quote);
}

TEST_CASE("parse_markdown accepts quote markers without a space") {
  const ParsedDocument doc = parse_markdown(">tight\n");
  const auto& quote = std::get<ParsedBlockquote>(doc.blocks[0]);
  CHECK(quote.paragraphs == std::vector<std::string>{"tight"});
}

TEST_CASE("parse_markdown reads terminated and unterminated fences") {
  const ParsedDocument done = parse_markdown("```text\ncode here\n```\n");
  REQUIRE(done.blocks.size() == 1);
  CHECK(std::get<ParsedCodeFence>(done.blocks[0]) ==
        ParsedCodeFence{"text", {"code here"}, true, 1});

  const ParsedDocument open = parse_markdown("```\ndangling\n");
  const auto& fence = std::get<ParsedCodeFence>(open.blocks[0]);
  CHECK(fence.info == "");
  CHECK(fence.lines == std::vector<std::string>{"dangling"});
  CHECK_FALSE(fence.terminated);
}

TEST_CASE("parse_markdown requires the closer run to cover the opener") {
  const ParsedDocument doc = parse_markdown("````\nx\n```\n`````\n");
  REQUIRE(doc.blocks.size() == 1);
  const auto& fence = std::get<ParsedCodeFence>(doc.blocks[0]);
  CHECK(fence.terminated);
  CHECK(fence.lines == std::vector<std::string>{"x", "```"});
}

TEST_CASE("parse_markdown rejects backticks in fence info strings") {
  const ParsedDocument doc = parse_markdown("``` bad`info\n");
  CHECK(std::holds_alternative<ParsedParagraph>(doc.blocks[0]));
}

TEST_CASE("parse_markdown keeps fence content verbatim") {
  const ParsedDocument doc = parse_markdown(
      "```text\n- not a list\n# not a heading\n```\n");
  const auto& fence = std::get<ParsedCodeFence>(doc.blocks[0]);
  CHECK(fence.lines ==
        std::vector<std::string>{"- not a list", "# not a heading"});
  CHECK(doc.lines[1].cls == LineClass::FenceContent);
}

TEST_CASE("parse_markdown flags html and rule lines as residual") {
  const ParsedDocument doc = parse_markdown(
      "<div>\n"
      "text line.\n"
      "---\n"
      "===\n"
      "  <!-- comment -->\n");
  REQUIRE(doc.lines.size() == 5);
  CHECK(doc.lines[0].cls == LineClass::Residual);
  CHECK(doc.lines[1].cls == LineClass::Paragraph);
  CHECK(doc.lines[2].cls == LineClass::Residual);
  CHECK(doc.lines[3].cls == LineClass::Residual);
  CHECK(doc.lines[4].cls == LineClass::Residual);
  // Residual lines never form blocks.
  REQUIRE(doc.blocks.size() == 1);
  CHECK(std::holds_alternative<ParsedParagraph>(doc.blocks[0]));
}

TEST_CASE("parse_markdown treats a lone angle word as prose") {
  const ParsedDocument doc = parse_markdown("< span\n");
  CHECK(doc.lines[0].cls == LineClass::Paragraph);
}

TEST_CASE("parse_markdown tolerates up to three leading spaces") {
  const ParsedDocument doc = parse_markdown("   ## Indented\n");
  CHECK(std::get<ParsedHeading>(doc.blocks[0]).text == "Indented");
  const ParsedDocument deep = parse_markdown("    ## Too deep\n");
  CHECK(std::holds_alternative<ParsedParagraph>(deep.blocks[0]));
}

TEST_CASE("parse_markdown normalizes CRLF and tabs before parsing") {
  const ParsedDocument doc = parse_markdown("a\r\nb\tc\n");
  const auto& para = std::get<ParsedParagraph>(doc.blocks[0]);
  CHECK(para.lines == std::vector<std::string>{"a", "b    c"});
}

TEST_CASE("parse_markdown records line classes with content offsets") {
  const ParsedDocument doc = parse_markdown(
      "## H\n"
      "\n"
      "- item text\n"
      "> quote text\n");
  REQUIRE(doc.lines.size() == 4);
  CHECK(doc.lines[0].cls == LineClass::Heading);
  CHECK(doc.lines[1].cls == LineClass::Blank);
  CHECK(doc.lines[2].cls == LineClass::ListItem);
  CHECK(doc.lines[2].content_offset == 2);
  CHECK(doc.lines[3].cls == LineClass::Quote);
  CHECK(doc.lines[3].content_offset == 2);
}

TEST_CASE("parse_markdown handles empty input") {
  const ParsedDocument doc = parse_markdown("");
  CHECK(doc.blocks.empty());
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

TEST_CASE("run_checks produces the fixed registry in order") {
  const ParsedDocument doc = parse_markdown("x.\n");
  const std::vector<CheckResult> checks = run_checks(doc, loose_spec());
  REQUIRE(checks.size() == 8);
  CHECK(checks[0].name == "fence-balance");
  CHECK(checks[1].name == "list-nesting");
  CHECK(checks[2].name == "table-consistency");
  CHECK(checks[3].name == "heading-hierarchy");
  CHECK(checks[4].name == "blockquote-count");
  CHECK(checks[5].name == "allowed-blocks");
  CHECK(checks[6].name == "wrap-compliance");
  CHECK(checks[7].name == "markdown-only");
}

TEST_CASE("fence-balance scores unterminated fences proportionally") {
  const ParsedDocument doc =
      parse_markdown("```text\nx\n```\n\n```text\ny\n");
  const CheckResult check =
      find_check(run_checks(doc, loose_spec()), "fence-balance");
  CHECK(check.score == doctest::Approx(0.5));
  CHECK_FALSE(check.details.empty());
}

TEST_CASE("list-nesting flags depth jumps and spec overruns") {
  StructuralSpec spec = loose_spec();
  const ParsedDocument jump = parse_markdown("- a\n    - deep jump\n");
  CHECK(find_check(run_checks(jump, spec), "list-nesting").score ==
        doctest::Approx(0.5));

  spec.max_list_depth = 1;
  const ParsedDocument over = parse_markdown("- a\n  - too deep\n");
  CHECK(find_check(run_checks(over, spec), "list-nesting").score ==
        doctest::Approx(0.5));

  spec.max_list_depth = 2;
  const ParsedDocument fine = parse_markdown("- a\n  - ok\n");
  CHECK(find_check(run_checks(fine, spec), "list-nesting").score == 1.0);
}

TEST_CASE("table-consistency flags missing separators and ragged rows") {
  const ParsedDocument ragged = parse_markdown(
      "| a | b |\n| --- | --- |\n| c | d |\n| only one |\n");
  const CheckResult check =
      find_check(run_checks(ragged, loose_spec()), "table-consistency");
  CHECK(check.score == doctest::Approx(2.0 / 3.0));

  const ParsedDocument bare = parse_markdown("| a | b |\n| c | d |\n");
  CHECK(find_check(run_checks(bare, loose_spec()), "table-consistency")
            .score == doctest::Approx(0.5));
}

TEST_CASE("heading-hierarchy penalizes skips and section count drift") {
  StructuralSpec spec = loose_spec();
  spec.section_count = 2;
  const ParsedDocument doc = parse_markdown("## A\n\nx.\n\n#### B\n");
  // One level skip plus one missing level-2 section over 2+2 opportunities.
  CHECK(find_check(run_checks(doc, spec), "heading-hierarchy").score ==
        doctest::Approx(0.5));

  const ParsedDocument deep_first = parse_markdown("### Only\n");
  spec.section_count = 0;
  const CheckResult check =
      find_check(run_checks(deep_first, spec), "heading-hierarchy");
  CHECK(check.score < 1.0);

  spec.section_count = 2;
  const ParsedDocument good = parse_markdown("## A\n\nx.\n\n## B\n");
  CHECK(find_check(run_checks(good, spec), "heading-hierarchy").score == 1.0);
}

TEST_CASE("blockquote-count measures absolute deviation from the target") {
  StructuralSpec spec = loose_spec();
  spec.blockquote_count = 2;
  auto score_for = [&spec](const std::string& text) {
    return find_check(run_checks(parse_markdown(text), spec),
                      "blockquote-count")
        .score;
  };
  CHECK(score_for("plain.\n") == doctest::Approx(0.0));
  CHECK(score_for("> one\n") == doctest::Approx(0.5));
  CHECK(score_for("> one\n\n> two\n") == doctest::Approx(1.0));
  CHECK(score_for("> one\n\n> two\n\n> three\n") == doctest::Approx(0.5));
  CHECK(score_for("> 1\n\n> 2\n\n> 3\n\n> 4\n") == doctest::Approx(0.0));
  CHECK(score_for("> 1\n\n> 2\n\n> 3\n\n> 4\n\n> 5\n") ==
        doctest::Approx(0.0));

  spec.blockquote_count = 0;
  CHECK(score_for("plain.\n") == doctest::Approx(1.0));
  CHECK(score_for("> unexpected\n") == doctest::Approx(0.0));
}

TEST_CASE("allowed-blocks flags block types outside the spec") {
  StructuralSpec spec = loose_spec();
  spec.allowed_blocks = {BlockType::BulletList, BlockType::Blockquote};
  const ParsedDocument doc = parse_markdown(
      "x.\n"
      "\n"
      "| a | b |\n| --- | --- |\n| c | d |\n"
      "\n"
      "- item\n");
  // Paragraph and bullet list allowed, table not: 1 violation / 3 blocks.
  CHECK(find_check(run_checks(doc, spec), "allowed-blocks").score ==
        doctest::Approx(2.0 / 3.0));
  spec.allowed_blocks.insert(BlockType::Table);
  CHECK(find_check(run_checks(doc, spec), "allowed-blocks").score == 1.0);
}

TEST_CASE("wrap-compliance is vacuous without a wrap width") {
  StructuralSpec spec = loose_spec();
  const std::string text(120, 'a');
  const ParsedDocument doc = parse_markdown("word " + text + " word\n");
  CHECK(find_check(run_checks(doc, spec), "wrap-compliance").score == 1.0);
}

TEST_CASE("wrap-compliance penalizes breakable overlong prose lines") {
  StructuralSpec spec = loose_spec();
  spec.wrap_width = 20;
  const ParsedDocument bad =
      parse_markdown("aaaa bbbb cccc dddd eeee\nshort line.\n");
  // One of two paragraph lines is overlong and breakable.
  CHECK(find_check(run_checks(bad, spec), "wrap-compliance").score ==
        doctest::Approx(0.5));

  const ParsedDocument unbreakable =
      parse_markdown(std::string(30, 'a') + "\n");
  CHECK(find_check(run_checks(unbreakable, spec), "wrap-compliance").score ==
        1.0);

  // First word already beyond the limit: no break point existed.
  const ParsedDocument pinned =
      parse_markdown(std::string(25, 'a') + " tail\n");
  CHECK(find_check(run_checks(pinned, spec), "wrap-compliance").score == 1.0);
}

TEST_CASE("markdown-only counts residual lines against non-blank lines") {
  const ParsedDocument doc = parse_markdown("<div>\n\nreal text.\n");
  CHECK(find_check(run_checks(doc, loose_spec()), "markdown-only").score ==
        doctest::Approx(0.5));
  const ParsedDocument clean_doc = parse_markdown("real text.\n");
  CHECK(find_check(run_checks(clean_doc, loose_spec()), "markdown-only")
            .score == 1.0);
}

TEST_CASE("check scores are 1.0 exactly when details are empty") {
  const std::vector<std::string> samples = {
      "## A\n\nx.\n",
      "```text\nopen\n",
      "- a\n      - jump\n",
      "<div>\n",
      "> q\n",
      "| a |\n| b | c |\n",
  };
  for (const std::string& text : samples) {
    const ParsedDocument doc = parse_markdown(text);
    for (const CheckResult& check : run_checks(doc, loose_spec())) {
      CAPTURE(text);
      CAPTURE(check.name);
      CHECK((check.score == 1.0) == check.details.empty());
    }
  }
}

TEST_CASE("structure_score averages the checks") {
  std::vector<CheckResult> checks = {
      {"a", 1.0, {}}, {"b", 0.5, {"d"}}, {"c", 0.0, {"d"}}};
  CHECK(structure_score(checks) == doctest::Approx(0.5));
}

// ---------------------------------------------------------------------------
// Content preservation
// ---------------------------------------------------------------------------

TEST_CASE("extract_content_fragments strips markup and padding") {
  const ParsedDocument doc = parse_markdown(
      "## Head\n"
      "\n"
      "Alpha beta.\n"
      "\n"
      "- item one\n"
      "- (no additional content)\n"
      "\n"
      "> quoted\n"
      ">\n"
      "> (see above)\n");
  CHECK(extract_content_fragments(doc) ==
        std::vector<std::string>{"Head", "Alpha beta.", "item one", "quoted"});
}

TEST_CASE("extract_content_fragments joins wrapped paragraph lines") {
  const ParsedDocument doc = parse_markdown("one two\nthree four\n");
  CHECK(extract_content_fragments(doc) ==
        std::vector<std::string>{"one two three four"});
}

TEST_CASE("lcs_length matches hand-computed cases") {
  CHECK(lcs_length({}, {}) == 0);
  CHECK(lcs_length({"a"}, {}) == 0);
  CHECK(lcs_length({"a", "b", "c"}, {"a", "b", "c"}) == 3);
  CHECK(lcs_length({"a", "b", "c"}, {"b", "a", "c"}) == 2);
  CHECK(lcs_length({"a", "b", "a"}, {"b", "a", "b"}) == 2);
  CHECK(lcs_length({"x"}, {"y"}) == 0);
}

TEST_CASE("lcs_length agrees with the exhaustive oracle") {
  std::mt19937_64 rng(0xFEED);
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<int> sym(0, 2);
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> a, b;
    int na = len(rng), nb = len(rng);
    for (int i = 0; i < na; ++i) a.push_back(alphabet[sym(rng)]);
    for (int i = 0; i < nb; ++i) b.push_back(alphabet[sym(rng)]);
    CHECK(lcs_length(a, b) == lcs_brute_force(a, b));
  }
}

TEST_CASE("content_preservation requires source units") {
  CHECK_THROWS_AS(content_preservation({}, "text\n"), std::invalid_argument);
}

TEST_CASE("content_preservation is exact on canonical renderings") {
  const std::vector<AtomicUnit> units = {
      {0, UnitKind::Heading, "Title"},
      {1, UnitKind::Sentence, "Alpha beta."},
      {2, UnitKind::Sentence, "Gamma delta."},
  };
  CHECK(content_preservation(
            units, "## Title\n\nAlpha beta.\n\n- Gamma delta.\n") ==
        doctest::Approx(1.0));
  // Dropping a unit costs exactly its share.
  CHECK(content_preservation(units, "## Title\n\nAlpha beta.\n") ==
        doctest::Approx(2.0 / 3.0));
  // Reordering breaks the common subsequence.
  CHECK(content_preservation(
            units, "## Title\n\nGamma delta.\n\nAlpha beta.\n") ==
        doctest::Approx(2.0 / 3.0));
  // Padding and extra markup never hurt.
  CHECK(content_preservation(units,
                             "## Title\n\nAlpha beta.\n\n- (see above)\n- "
                             "Gamma delta.\n\n> (no additional content)\n") ==
        doctest::Approx(1.0));
}

// ---------------------------------------------------------------------------
// Composite score
// ---------------------------------------------------------------------------

TEST_CASE("composite_score is the weighted sum of its terms") {
  const CompositeScore full = composite_score(1.0, 1.0);
  CHECK(full.r == doctest::Approx(2.0));
  CHECK(full.lambda1 == 1.0);
  CHECK(full.lambda2 == 1.0);
  CHECK(composite_score(0.25, 0.5).r == doctest::Approx(0.75));
  CHECK(composite_score(0.25, 0.5, 2.0, 4.0).r == doctest::Approx(2.5));
  CHECK(composite_score(0.0, 0.0).r == doctest::Approx(0.0));
}

TEST_CASE("composite_score validates its inputs") {
  CHECK_THROWS_AS(composite_score(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(composite_score(0.5, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(composite_score(0.5, 0.5, -1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(composite_score(0.5, 0.5, 1.0, -0.5),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Round trip against the synthesizer
// ---------------------------------------------------------------------------

TEST_CASE("canonical targets validate perfectly and match the projection") {
  const std::vector<SeedDocument> seeds = make_seed_corpus(48);
  for (const SeedDocument& seed : seeds) {
    const auto cleaned = clean(seed.text);
    if (!cleaned.has_value()) continue;
    const std::vector<AtomicUnit> units = segment(*cleaned);
    if (units.empty()) continue;
    for (int difficulty = 1; difficulty <= 3; ++difficulty) {
      const StructuralSpec spec = sample_spec(seed.id, 0, difficulty);
      const MarkdownDocument doc = synthesize(units, spec);
      const std::string text = render_markdown(doc, units, spec);
      CAPTURE(seed.id);
      CAPTURE(difficulty);

      const ValidationReport report = validate_output(text, spec, &units);
      for (const CheckResult& check : report.checks) {
        CAPTURE(check.name);
        if (check.score != 1.0) {
          for (const std::string& d : check.details) CAPTURE(d);
        }
        CHECK(check.score == 1.0);
      }
      CHECK(report.structure == 1.0);
      REQUIRE(report.preservation.has_value());
      CHECK(*report.preservation == 1.0);
      REQUIRE(report.composite.has_value());
      CHECK(*report.composite == doctest::Approx(2.0));

      CHECK(structurally_equal(parse_markdown(text),
                               projected_parse(doc, units)));
    }
  }
}

TEST_CASE("structurally_equal ignores line numbers but not structure") {
  ParsedDocument a = parse_markdown("## T\n\nx y.\n");
  ParsedDocument b = parse_markdown("## T\n\n\nx   y.\n");
  CHECK(structurally_equal(a, b));
  ParsedDocument c = parse_markdown("## T\n\nx z.\n");
  CHECK_FALSE(structurally_equal(a, c));
  ParsedDocument d = parse_markdown("### T\n\nx y.\n");
  CHECK_FALSE(structurally_equal(a, d));
  ParsedDocument e = parse_markdown("## T\n\n- x y.\n");
  CHECK_FALSE(structurally_equal(a, e));
}

TEST_CASE("validate_output without units omits preservation") {
  const StructuralSpec spec = loose_spec();
  const ValidationReport report = validate_output("x.\n", spec);
  CHECK_FALSE(report.preservation.has_value());
  CHECK_FALSE(report.composite.has_value());
  CHECK(report.validator_version == kValidatorVersion);
}

TEST_CASE("report_to_json_string exposes every check") {
  const StructuralSpec spec = loose_spec();
  const std::vector<AtomicUnit> units = {{0, UnitKind::Sentence, "x."}};
  const ValidationReport report = validate_output("x.\n", spec, &units);
  const std::string json = report_to_json_string(report);
  CHECK(json.find("\"fence-balance\"") != std::string::npos);
  CHECK(json.find("\"markdown-only\"") != std::string::npos);
  CHECK(json.find("\"structure_score\"") != std::string::npos);
  CHECK(json.find("\"content_preservation\"") != std::string::npos);
  CHECK(json.find("\"composite\"") != std::string::npos);
  CHECK(json.find("\"validator_version\"") != std::string::npos);
  CHECK(json.find(kValidatorVersion) != std::string::npos);
}
