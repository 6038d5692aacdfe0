#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tabletitle::extractor {

enum class NodeKind { Document, Element, Text };

struct Node {
  NodeKind kind = NodeKind::Element;
  std::string tag;  // lowercase; empty for text and document nodes
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;  // entity-decoded; text nodes only
  std::size_t parent = npos;
  std::vector<std::size_t> children;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool is_element(std::string_view name) const {
    return kind == NodeKind::Element && tag == name;
  }
  // Empty view when the attribute is missing.
  std::string_view attribute(std::string_view name) const;
};

// Immutable parse tree. Node ids are assigned in document (pre-)order, so
// the subtree of node `id` is exactly the id range [id, subtree_end(id)).
class DocumentTree {
 public:
  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::size_t id) const { return nodes_.at(id); }
  const Node& root() const { return nodes_.front(); }

  // Table element ids in document order; position in this list is the
  // table index used throughout extraction.
  std::span<const std::size_t> tables() const { return tables_; }
  std::size_t table_node(std::size_t table_index) const;

  std::size_t subtree_end(std::size_t id) const { return subtree_end_.at(id); }
  bool is_ancestor(std::size_t ancestor, std::size_t id) const {
    return ancestor < id && id < subtree_end_.at(ancestor);
  }
  // Closest strict ancestor with the given tag, or Node::npos.
  std::size_t nearest_ancestor(std::size_t id, std::string_view tag) const;

 private:
  friend DocumentTree parse_document(std::string_view html);
  void finalize();

  std::vector<Node> nodes_;
  std::vector<std::size_t> tables_;
  std::vector<std::size_t> subtree_end_;
};

// Best-effort, error-recovering parse. Throws Error(EmptyDocument) on empty
// input; never fails otherwise.
DocumentTree parse_document(std::string_view html);

// Decodes named and numeric character references.
std::string decode_entities(std::string_view raw);

// Concatenated descendant text of `id`, with a space inserted at block-level
// element and <br> boundaries. Text inside nested tables is skipped when
// `skip_nested_tables` is set.
std::string text_content(const DocumentTree& doc, std::size_t id,
                         bool skip_nested_tables = true);

bool is_block_element(std::string_view tag);
// Heading level 1-6 for h1..h6, 0 otherwise.
int heading_level(std::string_view tag);

}  // namespace tabletitle::extractor
