#include "tabletitle/corpus/encode.hpp"

#include <unordered_map>

#include "tabletitle/error.hpp"

namespace tabletitle::corpus {

Tokens linearize(const TableContext& c, const FieldConfig& config) {
  Tokens out;
  auto emit = [&](Field field, const Tokens& value) {
    if (value.empty()) return;
    out.emplace_back(field_marker(field));
    out.insert(out.end(), value.begin(), value.end());
  };
  if (config.page_title) emit(Field::PageTitle, c.page_title);
  if (config.section_headings)
    for (const auto& h : c.section_headings) emit(Field::SectionHeading, h.tokens);
  if (config.captions)
    for (const auto& v : c.captions) emit(Field::Caption, v);
  if (config.spanning_headers)
    for (const auto& v : c.spanning_headers) emit(Field::SpanningHeader, v);
  if (config.column_headers)
    for (const auto& v : c.column_headers) emit(Field::ColumnHeader, v);
  if (config.prefix_suffix) {
    emit(Field::Prefix, c.prefix_text);
    emit(Field::Suffix, c.suffix_text);
  }
  if (config.table_rows)
    for (const auto& row : c.table_rows) emit(Field::Row, tokenize(row));
  if (out.size() > config.max_tokens) out.resize(config.max_tokens);
  return out;
}

EncodedExample encode_source(std::span<const std::string> source, const Vocabulary& vocab) {
  EncodedExample ex;
  std::unordered_map<std::string, TokenId> oov_ids;
  const auto base = static_cast<TokenId>(vocab.size());
  ex.source_ids.reserve(source.size());
  ex.source_extended_ids.reserve(source.size());
  for (const auto& token : source) {
    if (auto id = vocab.find(token)) {
      ex.source_ids.push_back(*id);
      ex.source_extended_ids.push_back(*id);
      continue;
    }
    auto [it, inserted] = oov_ids.try_emplace(token, base + static_cast<TokenId>(ex.oov_tokens.size()));
    if (inserted) ex.oov_tokens.push_back(token);
    ex.source_ids.push_back(kUnkId);
    ex.source_extended_ids.push_back(it->second);
  }
  return ex;
}

void encode_target(EncodedExample& ex, std::span<const std::string> title, const Vocabulary& vocab) {
  const auto base = static_cast<TokenId>(vocab.size());
  ex.target_ids.clear();
  ex.target_ids.reserve(title.size() + 1);
  for (const auto& token : title) {
    if (auto id = vocab.find(token)) {
      ex.target_ids.push_back(*id);
      continue;
    }
    TokenId id = kUnkId;
    for (std::size_t k = 0; k < ex.oov_tokens.size(); ++k) {
      if (ex.oov_tokens[k] == token) {
        id = base + static_cast<TokenId>(k);
        break;
      }
    }
    ex.target_ids.push_back(id);
  }
  ex.target_ids.push_back(kStopId);
}

EncodedExample encode_example(const DatasetRecord& record, const Vocabulary& vocab,
                              const FieldConfig& config) {
  const Tokens source = linearize(record.context, config);
  EncodedExample ex = encode_source(source, vocab);
  encode_target(ex, tokenize(record.accepted_title), vocab);
  return ex;
}

EncodedDataset encode_records(std::span<const DatasetRecord> records, const Vocabulary& vocab,
                              const FieldConfig& config) {
  EncodedDataset out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Tokens source = linearize(records[i].context, config);
    const Tokens title = tokenize(records[i].accepted_title);
    if (source.empty() || title.empty()) {
      ++out.dropped;
      continue;
    }
    EncodedExample ex = encode_source(source, vocab);
    encode_target(ex, title, vocab);
    out.examples.push_back(std::move(ex));
    out.record_index.push_back(i);
  }
  return out;
}

std::string render_title(std::span<const TokenId> ids, const Vocabulary& vocab,
                         std::span<const std::string> oov_tokens, bool debug) {
  const auto vocab_size = static_cast<TokenId>(vocab.size());
  const auto limit = vocab_size + static_cast<TokenId>(oov_tokens.size());
  std::string out;
  auto push = [&](std::string_view token) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  };
  for (TokenId id : ids) {
    if (id < 0 || id >= limit)
      throw Error(ErrorCode::InvalidId, "token id " + std::to_string(id) + " outside extended vocabulary of " +
                                            std::to_string(limit));
    if (id == kPadId || id == kStartId || id == kStopId || is_marker_id(id)) continue;
    if (id == kUnkId) {
      if (debug) push(vocab.token(id));
      continue;
    }
    if (id >= vocab_size) {
      const std::string& token = oov_tokens[static_cast<std::size_t>(id - vocab_size)];
      if (debug) {
        push("__" + token + "__");
      } else {
        push(token);
      }
      continue;
    }
    push(vocab.token(id));
  }
  return out;
}

}  // namespace tabletitle::corpus
