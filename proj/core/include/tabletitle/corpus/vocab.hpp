#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tabletitle::corpus {

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kStartId = 2;
inline constexpr TokenId kStopId = 3;

// Metadata fields in serialization order.
enum class Field { PageTitle, SectionHeading, Caption, SpanningHeader, ColumnHeader, Prefix, Suffix, Row };
inline constexpr std::size_t kNumFields = 8;
inline constexpr TokenId kFirstMarkerId = 4;
inline constexpr TokenId kFirstRegularId = kFirstMarkerId + static_cast<TokenId>(kNumFields);

std::string_view field_marker(Field field);
inline TokenId marker_id(Field field) { return kFirstMarkerId + static_cast<TokenId>(field); }
inline bool is_marker_id(TokenId id) { return id >= kFirstMarkerId && id < kFirstRegularId; }

class Vocabulary {
 public:
  // Specials and field markers only.
  Vocabulary();

  std::size_t size() const { return tokens_.size(); }
  std::optional<TokenId> find(std::string_view token) const;
  TokenId id_or_unk(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::span<const std::string> tokens() const { return tokens_; }

  // Appends a token if unseen; returns its id.
  TokenId add(const std::string& token);

  // One token per line; the line number is the id.
  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

}  // namespace tabletitle::corpus
