#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tabletitle/cli/config.hpp"
#include "tabletitle/error.hpp"
#include "tabletitle/seqmodel/checkpoint.hpp"

namespace tabletitle::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kOffset = 14695981039346656037ULL;
constexpr std::uint64_t kPrime = 1099511628211ULL;

std::uint64_t fold(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kPrime;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) { return hex(fold(kOffset, bytes)); }

std::string digest_path(const std::string& path) {
  const fs::path root(path);
  if (!fs::is_directory(root)) return fnv1a_hex(slurp(root));
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(e.path());
  std::vector<std::string> rel;
  for (const auto& f : files) rel.push_back(fs::relative(f, root).generic_string());
  std::sort(rel.begin(), rel.end());
  std::uint64_t h = kOffset;
  for (const auto& r : rel) {
    h = fold(h, r);
    h = fold(h, std::string_view("\0", 1));
    h = fold(h, slurp(root / r));
  }
  return hex(h);
}

std::string manifest_text(const RunConfig& config, const std::vector<std::string>& input_paths) {
  std::string out;
  out += "tabletitle_version = " TABLETITLE_VERSION "\n";
  out += "checkpoint_format = " + std::to_string(seqmodel::kCheckpointVersion) + "\n";
  for (const auto& [key, value] : config_entries(config)) out += key + " = " + value + "\n";
  for (const auto& p : input_paths) {
    if (p.empty() || !fs::exists(p)) continue;
    out += "digest." + p + " = " + digest_path(p) + "\n";
  }
  return out;
}

void write_manifest(const std::string& path, const RunConfig& config, const std::vector<std::string>& input_paths) {
  std::ofstream out(path, std::ios::binary);
  if (!(out << manifest_text(config, input_paths))) throw Error(ErrorCode::IoError, "cannot write " + path);
}

}  // namespace tabletitle::cli
