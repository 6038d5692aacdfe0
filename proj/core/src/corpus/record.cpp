#include "tabletitle/corpus/record.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "tabletitle/error.hpp"

namespace tabletitle::corpus {

using nlohmann::json;

namespace {

json token_lists(const std::vector<Tokens>& lists) {
  json out = json::array();
  for (const auto& tokens : lists) out.push_back(join(tokens));
  return out;
}

std::vector<Tokens> parse_token_lists(const json& value) {
  std::vector<Tokens> out;
  for (const auto& item : value) out.push_back(tokenize(item.get<std::string>()));
  return out;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Validation: return "validation";
    case Split::Test: return "test";
    case Split::None: break;
  }
  return "";
}

Split parse_split(std::string_view name) {
  if (name.empty()) return Split::None;
  if (name == "train") return Split::Train;
  if (name == "validation") return Split::Validation;
  if (name == "test") return Split::Test;
  throw Error(ErrorCode::BadFormat, "unknown split '" + std::string(name) + "'");
}

std::string to_json_line(const DatasetRecord& r) {
  const TableContext& c = r.context;
  json obj;
  obj["page_title"] = join(c.page_title);
  json headings = json::array();
  for (const auto& h : c.section_headings) headings.push_back(json::array({h.level, join(h.tokens)}));
  obj["section_headings"] = std::move(headings);
  obj["captions"] = token_lists(c.captions);
  obj["spanning_headers"] = token_lists(c.spanning_headers);
  obj["column_headers"] = token_lists(c.column_headers);
  obj["prefix_text"] = join(c.prefix_text);
  obj["suffix_text"] = join(c.suffix_text);
  obj["table_rows"] = c.table_rows;
  obj["table_index"] = c.table_index;
  obj["source_url"] = c.source_url;
  obj["candidate_titles"] = r.candidate_titles;
  obj["title"] = r.accepted_title;
  obj["title_verbatim"] = r.title_verbatim;
  obj["split"] = std::string(split_name(r.split));
  // nlohmann::json orders keys, so the line is canonical.
  return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

DatasetRecord from_json_line(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("malformed dataset line: ") + e.what());
  }
  if (!obj.is_object()) throw Error(ErrorCode::BadFormat, "dataset line is not an object");
  try {
    DatasetRecord r;
    TableContext& c = r.context;
    c.page_title = tokenize(get_or<std::string>(obj, "page_title", ""));
    if (auto it = obj.find("section_headings"); it != obj.end()) {
      for (const auto& h : *it) {
        if (!h.is_array() || h.size() != 2)
          throw Error(ErrorCode::BadFormat, "section_headings entries must be [level, text]");
        c.section_headings.push_back({h[0].get<int>(), tokenize(h[1].get<std::string>())});
      }
    }
    if (auto it = obj.find("captions"); it != obj.end()) c.captions = parse_token_lists(*it);
    if (auto it = obj.find("spanning_headers"); it != obj.end()) c.spanning_headers = parse_token_lists(*it);
    if (auto it = obj.find("column_headers"); it != obj.end()) c.column_headers = parse_token_lists(*it);
    c.prefix_text = tokenize(get_or<std::string>(obj, "prefix_text", ""));
    c.suffix_text = tokenize(get_or<std::string>(obj, "suffix_text", ""));
    c.table_rows = get_or<std::vector<std::string>>(obj, "table_rows", {});
    c.table_index = get_or<std::size_t>(obj, "table_index", 0);
    c.source_url = get_or<std::string>(obj, "source_url", "");
    r.candidate_titles = get_or<std::vector<std::string>>(obj, "candidate_titles", {});
    r.accepted_title = get_or<std::string>(obj, "title", "");
    r.title_verbatim = get_or<bool>(obj, "title_verbatim", false);
    r.split = parse_split(get_or<std::string>(obj, "split", ""));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("bad dataset field: ") + e.what());
  }
}

std::vector<DatasetRecord> read_dataset(std::istream& in) {
  std::vector<DatasetRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(from_json_line(line));
  }
  return out;
}

std::vector<DatasetRecord> read_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dataset '" + path + "'");
  return read_dataset(in);
}

void write_dataset(std::ostream& out, const std::vector<DatasetRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

void write_dataset_file(const std::string& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write dataset '" + path + "'");
  write_dataset(out, records);
}

}  // namespace tabletitle::corpus
