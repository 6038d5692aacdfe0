#include "tabletitle/corpus/vocab.hpp"

#include <fstream>

#include "tabletitle/corpus/encode.hpp"
#include "tabletitle/error.hpp"

namespace tabletitle::corpus {

namespace {
constexpr std::array<std::string_view, 4> kSpecials = {"<pad>", "<unk>", "<s>", "</s>"};
constexpr std::array<std::string_view, kNumFields> kMarkers = {
    "#page_title", "#section_heading", "#caption", "#spanning_header",
    "#column_header", "#prefix", "#suffix", "#row"};
}  // namespace

std::string_view field_marker(Field field) { return kMarkers[static_cast<std::size_t>(field)]; }

Vocabulary::Vocabulary() {
  for (auto s : kSpecials) add(std::string(s));
  for (auto m : kMarkers) add(std::string(m));
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) return it->second;
  return std::nullopt;
}

TokenId Vocabulary::id_or_unk(std::string_view token) const { return find(token).value_or(kUnkId); }

TokenId Vocabulary::add(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<TokenId>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write vocabulary '" + path + "'");
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open vocabulary '" + path + "'");
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no < vocab.size()) {
      if (line != vocab.tokens_[line_no])
        throw Error(ErrorCode::BadFormat, "vocabulary line " + std::to_string(line_no) +
                                              " must be reserved token '" + vocab.tokens_[line_no] + "'");
    } else {
      if (vocab.find(line)) throw Error(ErrorCode::BadFormat, "duplicate vocabulary token '" + line + "'");
      vocab.add(line);
    }
    ++line_no;
  }
  if (line_no < kFirstRegularId)
    throw Error(ErrorCode::BadFormat, "vocabulary file is missing reserved tokens");
  return vocab;
}

Vocabulary build_vocab(std::span<const DatasetRecord> train_records, const FieldConfig& config) {
  if (train_records.empty()) throw Error(ErrorCode::EmptyCorpus, "no training records to build a vocabulary from");
  Vocabulary vocab;
  for (const auto& record : train_records) {
    for (const auto& t : linearize(record.context, config)) vocab.add(t);
    for (const auto& t : tokenize(record.accepted_title)) vocab.add(t);
  }
  return vocab;
}

}  // namespace tabletitle::corpus
