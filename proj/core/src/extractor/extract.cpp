#include "tabletitle/extractor/extract.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace tabletitle::extractor {

namespace {

constexpr std::size_t npos = Node::npos;

bool is_excluded_container(const Node& node) {
  return node.kind == NodeKind::Element &&
         (node.tag == "head" || node.tag == "title" || node.tag == "script" ||
          node.tag == "style" || node.tag == "noscript" || node.tag == "template");
}

// Nodes whose text never counts as running text, and table/heading nodes
// (with everything inside them) that end a prefix/suffix window.
struct NodeRoles {
  std::vector<char> excluded;
  std::vector<char> boundary;
};

NodeRoles classify_nodes(const DocumentTree& doc) {
  NodeRoles roles;
  roles.excluded.assign(doc.size(), 0);
  roles.boundary.assign(doc.size(), 0);
  for (std::size_t id = 0; id < doc.size(); ++id) {
    const Node& node = doc.node(id);
    if (node.parent != npos) {
      roles.excluded[id] = roles.excluded[node.parent];
      roles.boundary[id] = roles.boundary[node.parent];
    }
    if (is_excluded_container(node)) roles.excluded[id] = 1;
    if (node.kind == NodeKind::Element &&
        (node.tag == "table" || heading_level(node.tag) > 0))
      roles.boundary[id] = 1;
  }
  return roles;
}

std::size_t nearest_table(const DocumentTree& doc, std::size_t id) {
  return doc.nearest_ancestor(id, "table");
}

std::size_t parse_span(std::string_view value) {
  std::size_t span = 1;
  while (!value.empty() && (value.front() == ' ' || value.front() == '"')) value.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), span);
  if (ec != std::errc() || span < 1) return 1;
  return std::min<std::size_t>(span, 1000);
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

Tokens extract_page_title(const DocumentTree& doc) {
  std::size_t fallback = npos;
  for (std::size_t id = 0; id < doc.size(); ++id) {
    const Node& node = doc.node(id);
    if (!node.is_element("title")) continue;
    if (doc.nearest_ancestor(id, "head") != npos) return corpus::tokenize(text_content(doc, id));
    if (fallback == npos && doc.nearest_ancestor(id, "body") == npos &&
        doc.nearest_ancestor(id, "svg") == npos)
      fallback = id;
  }
  bool has_head = false;
  for (std::size_t id = 0; id < doc.size() && !has_head; ++id) has_head = doc.node(id).is_element("head");
  // Without a <head>, a stray title outside <body> belongs to the head.
  if (!has_head && fallback != npos) return corpus::tokenize(text_content(doc, fallback));
  return {};
}

std::vector<SectionHeading> extract_section_headings(const DocumentTree& doc,
                                                     std::size_t table_index) {
  const std::size_t table = doc.table_node(table_index);
  std::vector<SectionHeading> kept;
  int lowest = std::numeric_limits<int>::max();
  for (std::size_t id = table; id-- > 0;) {
    const Node& node = doc.node(id);
    if (node.kind != NodeKind::Element) continue;
    const int level = heading_level(node.tag);
    if (level == 0 || level >= lowest || doc.is_ancestor(id, table)) continue;
    Tokens tokens = corpus::tokenize(text_content(doc, id));
    if (tokens.empty()) continue;
    kept.push_back({level, std::move(tokens)});
    lowest = level;
  }
  std::reverse(kept.begin(), kept.end());
  return kept;
}

TableFields extract_table_fields(const DocumentTree& doc, std::size_t table_index) {
  const std::size_t table = doc.table_node(table_index);
  TableFields fields;

  struct Cell {
    std::size_t id;
    bool header;
    std::size_t span;
  };
  std::vector<std::vector<Cell>> rows;
  for (std::size_t id = table + 1; id < doc.subtree_end(table); ++id) {
    const Node& node = doc.node(id);
    if (node.kind != NodeKind::Element || nearest_table(doc, id) != table) continue;
    if (node.tag == "caption") {
      Tokens tokens = corpus::tokenize(text_content(doc, id));
      if (!tokens.empty()) fields.captions.push_back(std::move(tokens));
    } else if (node.tag == "tr") {
      std::vector<Cell> cells;
      for (std::size_t child : node.children) {
        const Node& c = doc.node(child);
        if (c.is_element("td") || c.is_element("th"))
          cells.push_back({child, c.tag == "th", parse_span(c.attribute("colspan"))});
      }
      if (!cells.empty()) rows.push_back(std::move(cells));
    }
  }

  std::size_t column_count = 0;
  for (const auto& row : rows) {
    std::size_t width = 0;
    for (const Cell& c : row) width += c.span;
    column_count = std::max(column_count, width);
  }

  for (const auto& row : rows) {
    const bool header_row =
        std::all_of(row.begin(), row.end(), [](const Cell& c) { return c.header; });
    std::string joined;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& cell = row[i];
      const std::string text = text_content(doc, cell.id);
      if (cell.header) {
        Tokens tokens = corpus::tokenize(text);
        if (!tokens.empty()) {
          if (cell.span == column_count) fields.spanning_headers.push_back(tokens);
          fields.column_headers.push_back(std::move(tokens));
        }
      }
      if (!header_row) {
        if (i) joined += ", ";
        joined += collapse_whitespace(text);
      }
    }
    if (!header_row) fields.table_rows.push_back(std::move(joined));
  }
  return fields;
}

std::pair<Tokens, Tokens> extract_prefix_suffix(const DocumentTree& doc,
                                                std::size_t table_index) {
  const std::size_t table = doc.table_node(table_index);
  const NodeRoles roles = classify_nodes(doc);

  // Document-order stream of text and block separators. A boundary piece
  // comes from a table or heading (or anything inside one).
  struct Piece {
    bool boundary;
    std::string_view text;
  };
  std::vector<Piece> pieces;
  std::vector<std::size_t> open_blocks;
  std::size_t table_begin = 0;
  std::size_t table_end = 0;
  bool inside_target = false;
  for (std::size_t id = 0; id <= doc.size(); ++id) {
    while (!open_blocks.empty() && doc.subtree_end(open_blocks.back()) <= id) {
      pieces.push_back({roles.boundary[open_blocks.back()] != 0, " "});
      open_blocks.pop_back();
    }
    if (inside_target && id >= doc.subtree_end(table)) {
      inside_target = false;
      table_end = pieces.size();
    }
    if (id == doc.size()) break;
    if (id == table) {
      table_begin = pieces.size();
      inside_target = true;
    }
    if (roles.excluded[id]) continue;
    const Node& node = doc.node(id);
    if (node.kind == NodeKind::Text) {
      pieces.push_back({roles.boundary[id] != 0, node.text});
    } else if (node.kind == NodeKind::Element && is_block_element(node.tag)) {
      pieces.push_back({roles.boundary[id] != 0, " "});
      open_blocks.push_back(id);
    }
  }

  std::size_t first = table_begin;
  while (first > 0 && !pieces[first - 1].boundary) --first;
  std::string before;
  for (std::size_t k = first; k < table_begin; ++k) before += pieces[k].text;
  Tokens prefix = corpus::tokenize(before);
  if (prefix.size() > kContextWindow)
    prefix.erase(prefix.begin(), prefix.end() - static_cast<std::ptrdiff_t>(kContextWindow));

  std::string after;
  for (std::size_t k = table_end; k < pieces.size() && !pieces[k].boundary; ++k)
    after += pieces[k].text;
  Tokens suffix = corpus::tokenize(after);
  if (suffix.size() > kContextWindow) suffix.resize(kContextWindow);
  return {std::move(prefix), std::move(suffix)};
}

TableContext extract_context(const DocumentTree& doc, std::size_t table_index) {
  TableContext ctx;
  ctx.table_index = table_index;
  ctx.page_title = extract_page_title(doc);
  ctx.section_headings = extract_section_headings(doc, table_index);
  TableFields fields = extract_table_fields(doc, table_index);
  ctx.captions = std::move(fields.captions);
  ctx.spanning_headers = std::move(fields.spanning_headers);
  ctx.column_headers = std::move(fields.column_headers);
  ctx.table_rows = std::move(fields.table_rows);
  auto [prefix, suffix] = extract_prefix_suffix(doc, table_index);
  ctx.prefix_text = std::move(prefix);
  ctx.suffix_text = std::move(suffix);
  return ctx;
}

std::vector<TableContext> extract_all(const DocumentTree& doc, const std::string& source_url) {
  std::vector<TableContext> out;
  out.reserve(doc.tables().size());
  for (std::size_t i = 0; i < doc.tables().size(); ++i) {
    out.push_back(extract_context(doc, i));
    out.back().source_url = source_url;
  }
  return out;
}

}  // namespace tabletitle::extractor
