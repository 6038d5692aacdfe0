#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tabletitle/corpus/tokenize.hpp"
#include "tabletitle/extractor/extract.hpp"

namespace tabletitle::testing {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fixture_dir() { return TABLETITLE_FIXTURE_DIR; }

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json actual_json(const extractor::TableContext& c) {
  auto lists = [](const std::vector<corpus::Tokens>& v) {
    json out = json::array();
    for (const auto& t : v) out.push_back(corpus::join(t));
    return out;
  };
  json out;
  out["table_index"] = c.table_index;
  out["page_title"] = corpus::join(c.page_title);
  out["section_headings"] = json::array();
  for (const auto& h : c.section_headings) out["section_headings"].push_back({h.level, corpus::join(h.tokens)});
  out["captions"] = lists(c.captions);
  out["spanning_headers"] = lists(c.spanning_headers);
  out["column_headers"] = lists(c.column_headers);
  out["prefix_text"] = corpus::join(c.prefix_text);
  out["suffix_text"] = corpus::join(c.suffix_text);
  out["table_rows"] = c.table_rows;
  return out;
}

}  // namespace

std::vector<FixtureOutcome> check_extraction_fixtures() {
  std::vector<fs::path> pages;
  for (const auto& e : fs::directory_iterator(fs::path(fixture_dir()) / "extract"))
    if (e.path().extension() == ".html") pages.push_back(e.path());
  std::sort(pages.begin(), pages.end());

  std::vector<FixtureOutcome> out;
  for (const auto& page : pages) {
    FixtureOutcome outcome{page.stem().string(), {}};
    fs::path expected_path = page;
    expected_path.replace_extension(".json");
    const json expected = json::parse(slurp(expected_path));
    const auto doc = extractor::parse_document(slurp(page));
    if (doc.tables().size() != expected["tables"].get<std::size_t>())
      outcome.mismatches.push_back("tables: expected " + expected["tables"].dump() + ", got " +
                                   std::to_string(doc.tables().size()));
    for (const auto& want : expected["contexts"]) {
      const std::size_t index = want["table_index"].get<std::size_t>();
      if (index >= doc.tables().size()) {
        outcome.mismatches.push_back("missing table " + std::to_string(index));
        continue;
      }
      const json got = actual_json(extractor::extract_context(doc, index));
      for (const auto& [key, value] : want.items())
        if (got[key] != value)
          outcome.mismatches.push_back("table " + std::to_string(index) + " " + key + ": expected " + value.dump() +
                                       ", got " + got[key].dump());
    }
    out.push_back(std::move(outcome));
  }
  return out;
}

}  // namespace tabletitle::testing
