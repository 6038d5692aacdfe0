#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabletitle/extractor/extract.hpp"

namespace tabletitle::corpus {

using extractor::TableContext;

enum class Split { None, Train, Validation, Test };

std::string_view split_name(Split split);
Split parse_split(std::string_view name);  // "" -> None; throws BadFormat on others

struct DatasetRecord {
  TableContext context;
  std::vector<std::string> candidate_titles;
  std::string accepted_title;
  bool title_verbatim = false;
  Split split = Split::None;

  bool operator==(const DatasetRecord&) const = default;
};

// One JSON object per line. Token-list fields are stored as space-joined
// text; re-tokenizing them reproduces the stored tokens.
std::string to_json_line(const DatasetRecord& record);
DatasetRecord from_json_line(std::string_view line);

std::vector<DatasetRecord> read_dataset(std::istream& in);
std::vector<DatasetRecord> read_dataset_file(const std::string& path);
void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records);
void write_dataset_file(const std::string& path, const std::vector<DatasetRecord>& records);

}  // namespace tabletitle::corpus
