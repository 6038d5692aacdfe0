#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tabletitle/corpus/record.hpp"
#include "tabletitle/corpus/tokenize.hpp"
#include "tabletitle/corpus/vocab.hpp"

namespace tabletitle::corpus {

inline constexpr std::size_t kMaxSourceLen = 150;

// Which fields feed the model input. Defaults to the five header-like
// fields; prefix/suffix and rows are opt-in.
struct FieldConfig {
  bool page_title = true;
  bool section_headings = true;
  bool captions = true;
  bool spanning_headers = true;
  bool column_headers = true;
  bool prefix_suffix = false;
  bool table_rows = false;
  std::size_t max_tokens = kMaxSourceLen;

  bool operator==(const FieldConfig&) const = default;
};

// Marker-tagged token sequence, truncated to config.max_tokens.
Tokens linearize(const TableContext& context, const FieldConfig& config = {});

struct EncodedExample {
  std::vector<TokenId> source_ids;           // UNK for OOV
  std::vector<TokenId> source_extended_ids;  // OOV k -> |vocab| + k
  std::vector<std::string> oov_tokens;       // first-occurrence order
  std::vector<TokenId> target_ids;           // extended space, ends with STOP

  std::size_t extended_size(std::size_t vocab_size) const { return vocab_size + oov_tokens.size(); }
  bool operator==(const EncodedExample&) const = default;
};

// Source side only (target_ids left empty).
EncodedExample encode_source(std::span<const std::string> source, const Vocabulary& vocab);
// Adds the target: source OOVs map to their extended id, other OOVs to UNK.
void encode_target(EncodedExample& example, std::span<const std::string> title, const Vocabulary& vocab);

EncodedExample encode_example(const DatasetRecord& record, const Vocabulary& vocab,
                              const FieldConfig& config = {});

struct EncodedDataset {
  std::vector<EncodedExample> examples;
  std::vector<std::size_t> record_index;  // source record for each example
  std::size_t dropped = 0;                // empty input or empty title
};
EncodedDataset encode_records(std::span<const DatasetRecord> records, const Vocabulary& vocab,
                              const FieldConfig& config = {});

// Throws InvalidId for ids outside the extended space. PAD, START, STOP and
// markers are suppressed; UNK renders as "<unk>" only when debug is set.
// With debug, copied OOV tokens render as __token__.
std::string render_title(std::span<const TokenId> ids, const Vocabulary& vocab,
                         std::span<const std::string> oov_tokens, bool debug = false);

Vocabulary build_vocab(std::span<const DatasetRecord> train_records, const FieldConfig& config = {});

}  // namespace tabletitle::corpus
