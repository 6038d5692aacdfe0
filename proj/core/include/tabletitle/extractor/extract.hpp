#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tabletitle/corpus/tokenize.hpp"
#include "tabletitle/extractor/html.hpp"

namespace tabletitle::extractor {

using corpus::Tokens;

inline constexpr std::size_t kContextWindow = 200;

struct SectionHeading {
  int level = 0;  // 1..6
  Tokens tokens;

  bool operator==(const SectionHeading&) const = default;
};

// Metadata harvested around one table. Token lists are lowercased corpus
// tokens; table rows keep their original text.
struct TableContext {
  Tokens page_title;
  std::vector<SectionHeading> section_headings;  // reading order, nearest last
  std::vector<Tokens> captions;
  std::vector<Tokens> spanning_headers;
  std::vector<Tokens> column_headers;
  Tokens prefix_text;  // at most kContextWindow tokens
  Tokens suffix_text;  // at most kContextWindow tokens
  std::vector<std::string> table_rows;
  std::size_t table_index = 0;
  std::string source_url;

  bool operator==(const TableContext&) const = default;
};

struct TableFields {
  std::vector<Tokens> captions;
  std::vector<Tokens> spanning_headers;
  std::vector<Tokens> column_headers;
  std::vector<std::string> table_rows;
};

Tokens extract_page_title(const DocumentTree& doc);

// Walks backward from the table keeping a heading only if its level is
// strictly lower than every level kept so far.
std::vector<SectionHeading> extract_section_headings(const DocumentTree& doc,
                                                     std::size_t table_index);

TableFields extract_table_fields(const DocumentTree& doc, std::size_t table_index);

// Up to kContextWindow tokens before and after the table, stopping at any
// other table or any h1-h6 element.
std::pair<Tokens, Tokens> extract_prefix_suffix(const DocumentTree& doc,
                                                std::size_t table_index);

TableContext extract_context(const DocumentTree& doc, std::size_t table_index);

// One context per table in document order.
std::vector<TableContext> extract_all(const DocumentTree& doc, const std::string& source_url = {});

}  // namespace tabletitle::extractor
