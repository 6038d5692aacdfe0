#include "tabletitle/extractor/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <initializer_list>
#include <stdexcept>
#include <unordered_map>

#include "tabletitle/error.hpp"

namespace tabletitle::extractor {

namespace {

constexpr std::size_t npos = Node::npos;

bool one_of(std::string_view s, std::initializer_list<std::string_view> set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_void_element(std::string_view tag) {
  return one_of(tag, {"area", "base", "br", "col", "embed", "hr", "img",
                      "input", "link", "meta", "param", "source", "track",
                      "wbr", "keygen"});
}

// Start tags that implicitly close an open <p>.
bool closes_paragraph(std::string_view tag) {
  return one_of(tag, {"address", "article", "aside", "blockquote", "center",
                      "details", "dialog", "dir", "div", "dl", "fieldset",
                      "figcaption", "figure", "footer", "form", "h1", "h2",
                      "h3", "h4", "h5", "h6", "header", "hgroup", "hr", "main",
                      "menu", "nav", "ol", "p", "pre", "section", "table",
                      "ul", "li", "dd", "dt"});
}

bool is_table_section(std::string_view tag) {
  return one_of(tag, {"thead", "tbody", "tfoot"});
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

const std::unordered_map<std::string_view, char32_t>& named_entities() {
  static const std::unordered_map<std::string_view, char32_t> table = {
      {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},
      {"quot", U'"'},     {"apos", U'\''},    {"nbsp", U' '},
      {"ndash", 0x2013},  {"mdash", 0x2014},  {"middot", 0x00B7},
      {"copy", 0x00A9},   {"reg", 0x00AE},    {"trade", 0x2122},
      {"hellip", 0x2026}, {"laquo", 0x00AB},  {"raquo", 0x00BB},
      {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},
      {"rdquo", 0x201D},  {"bull", 0x2022},   {"times", 0x00D7},
      {"deg", 0x00B0},    {"eacute", 0x00E9}, {"egrave", 0x00E8},
      {"aacute", 0x00E1}, {"oacute", 0x00F3}, {"iacute", 0x00ED},
      {"uacute", 0x00FA}, {"ntilde", 0x00F1}, {"uuml", 0x00FC},
      {"ouml", 0x00F6},   {"auml", 0x00E4},   {"szlig", 0x00DF},
      {"ccedil", 0x00E7}, {"pound", 0x00A3},  {"euro", 0x20AC},
      {"sect", 0x00A7},   {"para", 0x00B6},   {"shy", 0x00AD},
  };
  return table;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

bool iequals_prefix(std::string_view text, std::size_t pos, std::string_view word) {
  if (pos + word.size() > text.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != word[i]) return false;
  }
  return true;
}

// Position of the case-insensitive "</name" that ends a raw-text element.
std::size_t find_raw_end(std::string_view html, std::size_t from, std::string_view name) {
  for (std::size_t pos = html.find("</", from); pos != std::string_view::npos;
       pos = html.find("</", pos + 2)) {
    if (iequals_prefix(html, pos + 2, name)) {
      const std::size_t after = pos + 2 + name.size();
      if (after >= html.size() || is_space(html[after]) || html[after] == '>' ||
          html[after] == '/')
        return pos;
    }
  }
  return std::string_view::npos;
}

class TreeBuilder {
 public:
  explicit TreeBuilder(std::vector<Node>& nodes) : nodes_(nodes) {
    Node root;
    root.kind = NodeKind::Document;
    nodes_.push_back(std::move(root));
    stack_.push_back(0);
  }

  void start_tag(std::string tag, std::vector<std::pair<std::string, std::string>> attrs) {
    if (closes_paragraph(tag)) close_if_open("p", {"table", "td", "th", "caption", "button"});

    if (heading_level(tag) > 0 && heading_level(top_tag()) > 0) pop();

    if (tag == "li") {
      close_if_open("li", {"ul", "ol", "table", "td", "th"});
    } else if (tag == "dt" || tag == "dd") {
      close_if_open("dt", {"dl", "table", "td", "th"});
      close_if_open("dd", {"dl", "table", "td", "th"});
    } else if (tag == "option") {
      if (top_tag() == "option") pop();
    }

    if (tag == "td" || tag == "th" || tag == "tr" || tag == "caption" ||
        is_table_section(tag) || tag == "col" || tag == "colgroup") {
      const std::size_t table_pos = find_open("table", {});
      if (table_pos == npos) return;  // stray table-structure tag: ignored
      if (tag == "caption" || is_table_section(tag) || tag == "colgroup" || tag == "col") {
        pop_to_size(table_pos + 1);
      } else if (tag == "tr") {
        const std::size_t tr_pos = find_open("tr", {"table"});
        if (tr_pos != npos) {
          pop_to_size(tr_pos);
        } else {
          // Close a dangling caption or colgroup.
          const std::size_t cell_pos = find_any_open({"td", "th", "caption"}, {"table"});
          if (cell_pos != npos) pop_to_size(cell_pos);
        }
      } else {  // td / th
        const std::size_t cell_pos = find_any_open({"td", "th"}, {"tr", "table"});
        if (cell_pos != npos) pop_to_size(cell_pos);
        if (find_open("tr", {"table"}) == npos) {
          const std::size_t caption_pos = find_open("caption", {"table"});
          if (caption_pos != npos) pop_to_size(caption_pos);
          push_element("tr", {});
        }
      }
    } else if (tag == "table") {
      // A table opened directly inside another table's structure (not in a
      // cell) closes the current table first.
      const std::size_t ctx = find_any_open({"td", "th", "caption", "table"}, {});
      if (ctx != npos && nodes_[stack_[ctx]].tag == "table") pop_to_size(ctx);
    }

    const bool is_void = is_void_element(tag);
    push_element(std::move(tag), std::move(attrs));
    if (is_void) pop();
  }

  void end_tag(const std::string& tag) {
    if (tag == "br") {
      push_element("br", {});
      pop();
      return;
    }
    std::size_t pos = npos;
    if (tag == "table") {
      pos = find_open("table", {});
    } else if (tag == "td" || tag == "th" || tag == "tr" || tag == "caption" ||
               is_table_section(tag)) {
      pos = find_open(tag, {"table"});
    } else {
      pos = find_open(tag, {"table", "td", "th", "caption"});
    }
    if (pos != npos) pop_to_size(pos);
  }

  void text(std::string content) {
    if (content.empty()) return;
    Node& parent = nodes_[stack_.back()];
    if (!parent.children.empty()) {
      Node& last = nodes_[parent.children.back()];
      if (last.kind == NodeKind::Text && parent.children.back() == nodes_.size() - 1) {
        last.text += content;
        return;
      }
    }
    Node node;
    node.kind = NodeKind::Text;
    node.text = std::move(content);
    append(std::move(node));
  }

  const std::string& top_tag() const { return nodes_[stack_.back()].tag; }

 private:
  void push_element(std::string tag, std::vector<std::pair<std::string, std::string>> attrs) {
    Node node;
    node.kind = NodeKind::Element;
    node.tag = std::move(tag);
    node.attributes = std::move(attrs);
    stack_.push_back(append(std::move(node)));
  }

  std::size_t append(Node node) {
    const std::size_t id = nodes_.size();
    node.parent = stack_.back();
    nodes_.push_back(std::move(node));
    nodes_[nodes_[id].parent].children.push_back(id);
    return id;
  }

  void pop() {
    if (stack_.size() > 1) stack_.pop_back();
  }
  void pop_to_size(std::size_t size) {
    if (size < 1) size = 1;
    if (stack_.size() > size) stack_.resize(size);
  }

  // Stack position of the nearest open `tag`, scanning down from the top and
  // stopping at any boundary tag.
  std::size_t find_open(std::string_view tag, std::initializer_list<std::string_view> boundaries) const {
    return find_any_open({tag}, boundaries);
  }
  std::size_t find_any_open(std::initializer_list<std::string_view> tags,
                            std::initializer_list<std::string_view> boundaries) const {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const std::string& t = nodes_[stack_[i]].tag;
      if (one_of(t, tags)) return i;
      if (one_of(t, boundaries)) return npos;
    }
    return npos;
  }
  void close_if_open(std::string_view tag, std::initializer_list<std::string_view> boundaries) {
    const std::size_t pos = find_open(tag, boundaries);
    if (pos != npos) pop_to_size(pos);
  }

  std::vector<Node>& nodes_;
  std::vector<std::size_t> stack_;
};

struct TagToken {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attrs;
  bool closing = false;
};

// Parses a tag starting at html[pos] == '<'. Returns the position after '>'
// or npos when the text is not a tag.
std::size_t parse_tag(std::string_view html, std::size_t pos, TagToken& tok) {
  std::size_t i = pos + 1;
  if (i < html.size() && html[i] == '/') {
    tok.closing = true;
    ++i;
  }
  if (i >= html.size() || !std::isalpha(static_cast<unsigned char>(html[i]))) return npos;
  const std::size_t name_start = i;
  while (i < html.size() && !is_space(html[i]) && html[i] != '>' && html[i] != '/') ++i;
  tok.name = to_lower(html.substr(name_start, i - name_start));

  while (i < html.size()) {
    while (i < html.size() && (is_space(html[i]) || html[i] == '/')) ++i;
    if (i >= html.size()) break;
    if (html[i] == '>') return i + 1;
    const std::size_t attr_start = i;
    while (i < html.size() && !is_space(html[i]) && html[i] != '>' && html[i] != '=' &&
           html[i] != '/')
      ++i;
    std::string name = to_lower(html.substr(attr_start, i - attr_start));
    while (i < html.size() && is_space(html[i])) ++i;
    std::string value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && is_space(html[i])) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        const char quote = html[i++];
        const std::size_t end = html.find(quote, i);
        const std::size_t stop = end == std::string_view::npos ? html.size() : end;
        value = decode_entities(html.substr(i, stop - i));
        i = end == std::string_view::npos ? html.size() : end + 1;
      } else {
        const std::size_t v_start = i;
        while (i < html.size() && !is_space(html[i]) && html[i] != '>') ++i;
        value = decode_entities(html.substr(v_start, i - v_start));
      }
    }
    if (!name.empty()) tok.attrs.emplace_back(std::move(name), std::move(value));
  }
  return html.size();
}

}  // namespace

std::string_view Node::attribute(std::string_view name) const {
  for (const auto& [key, value] : attributes) {
    if (key == name) return value;
  }
  return {};
}

std::size_t DocumentTree::table_node(std::size_t table_index) const {
  if (table_index >= tables_.size())
    throw std::out_of_range("table index " + std::to_string(table_index) + " out of range");
  return tables_[table_index];
}

std::size_t DocumentTree::nearest_ancestor(std::size_t id, std::string_view tag) const {
  for (std::size_t p = nodes_.at(id).parent; p != npos; p = nodes_[p].parent) {
    if (nodes_[p].is_element(tag)) return p;
  }
  return npos;
}

void DocumentTree::finalize() {
  subtree_end_.assign(nodes_.size(), 0);
  for (std::size_t id = nodes_.size(); id-- > 0;) {
    std::size_t end = id + 1;
    for (std::size_t child : nodes_[id].children) end = std::max(end, subtree_end_[child]);
    subtree_end_[id] = end;
  }
  tables_.clear();
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].is_element("table")) tables_.push_back(id);
  }
}

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    if (raw[i] != '&') {
      out.push_back(raw[i++]);
      continue;
    }
    const std::size_t semi = raw.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(raw[i++]);
      continue;
    }
    std::string_view name = raw.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (!name.empty() && name[0] == '#') {
      unsigned long cp = 0;
      const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
      const std::string_view digits = name.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() &&
          cp > 0 && cp < 0x110000) {
        append_utf8(out, cp == 0xA0 ? U' ' : static_cast<char32_t>(cp));
        decoded = true;
      }
    } else {
      const auto& table = named_entities();
      if (auto it = table.find(name); it != table.end()) {
        append_utf8(out, it->second);
        decoded = true;
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(raw[i++]);
    }
  }
  return out;
}

bool is_block_element(std::string_view tag) {
  return closes_paragraph(tag) || one_of(tag, {"br", "tr", "td", "th", "caption", "table",
                                               "tbody", "thead", "tfoot", "body", "html",
                                               "head", "title", "option", "select",
                                               "textarea", "img"});
}

int heading_level(std::string_view tag) {
  if (tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6') return tag[1] - '0';
  return 0;
}

DocumentTree parse_document(std::string_view html) {
  if (html.empty()) throw Error(ErrorCode::EmptyDocument, "empty HTML document");

  DocumentTree doc;
  TreeBuilder builder(doc.nodes_);
  std::string pending;

  auto flush_text = [&] {
    if (!pending.empty()) {
      builder.text(decode_entities(pending));
      pending.clear();
    }
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      const std::size_t next = html.find('<', i);
      const std::size_t stop = next == std::string_view::npos ? html.size() : next;
      pending.append(html.substr(i, stop - i));
      i = stop;
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      flush_text();
      const std::size_t end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      flush_text();
      const std::size_t end = html.find('>', i + 2);
      i = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    TagToken tok;
    const std::size_t after = parse_tag(html, i, tok);
    if (after == npos) {
      pending.push_back('<');
      ++i;
      continue;
    }
    flush_text();
    i = after;
    if (tok.closing) {
      builder.end_tag(tok.name);
      continue;
    }
    const std::string name = tok.name;
    builder.start_tag(std::move(tok.name), std::move(tok.attrs));
    if (name == "script" || name == "style" || name == "textarea" || name == "title" ||
        name == "xmp" || name == "noscript" || name == "template") {
      const std::size_t end = find_raw_end(html, i, name);
      const std::size_t stop = end == std::string_view::npos ? html.size() : end;
      if (name == "title" || name == "textarea") builder.text(decode_entities(html.substr(i, stop - i)));
      if (end == std::string_view::npos) {
        i = html.size();
      } else {
        const std::size_t close = html.find('>', end);
        i = close == std::string_view::npos ? html.size() : close + 1;
      }
      builder.end_tag(name);
    }
  }
  flush_text();
  doc.finalize();
  return doc;
}

std::string text_content(const DocumentTree& doc, std::size_t id, bool skip_nested_tables) {
  std::string out;
  std::vector<std::size_t> open_blocks;  // subtree ends of enclosing block elements
  const std::size_t end = doc.subtree_end(id);
  for (std::size_t n = id + 1; n < end;) {
    while (!open_blocks.empty() && open_blocks.back() <= n) {
      open_blocks.pop_back();
      out.push_back(' ');
    }
    const Node& node = doc.node(n);
    if (node.kind == NodeKind::Element) {
      if ((skip_nested_tables && node.tag == "table") || node.tag == "script" ||
          node.tag == "style" || node.tag == "template") {
        out.push_back(' ');
        n = doc.subtree_end(n);
        continue;
      }
      if (is_block_element(node.tag)) {
        out.push_back(' ');
        open_blocks.push_back(doc.subtree_end(n));
      }
    } else if (node.kind == NodeKind::Text) {
      out += node.text;
    }
    ++n;
  }
  return out;
}

}  // namespace tabletitle::extractor
