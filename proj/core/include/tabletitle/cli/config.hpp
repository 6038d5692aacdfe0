#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tabletitle/corpus/encode.hpp"
#include "tabletitle/decoder/beam.hpp"
#include "tabletitle/seqmodel/hyperparams.hpp"

namespace tabletitle::cli {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Everything a command can be told. Config file and manifest keys mirror
// the long flag names; negated flags (--no-renormalize) map to the positive
// key (renormalize = false).
struct RunConfig {
  std::string command;  // "train", "dataset split", ...

  std::vector<std::string> inputs;  // --input, or --predictions for evaluate
  std::string output;               // --out
  std::string vocab;
  std::string checkpoint;
  std::string data;
  std::string references;
  std::string workdir;

  std::string split;  // empty = all records
  std::string mode = "copy_generate";
  seqmodel::Hyperparams hyper;
  corpus::FieldConfig fields;
  decoder::BeamOptions beam;
  bool debug_oov = false;
  bool dedup_surface = true;
  bool baselines = false;
  std::size_t jobs = 1;
  std::string log_level = "info";

  // Keeps fields.max_tokens in step with hyper.max_source_len.
  void sync();
};

// Every effective value, in a fixed order.
ConfigEntries config_entries(const RunConfig& config);

// Sets one key. Throws Error(Usage) for unknown keys or unparsable values.
void apply_entry(RunConfig& config, const std::string& key, const std::string& value);

// Flat "key = value" lines; '#' starts a comment, blank lines ignored.
ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);

// Applies entries whose keys are known; returns the ignored keys.
std::vector<std::string> apply_entries(RunConfig& config, const ConfigEntries& entries);

// 64-bit FNV-1a, lowercase hex. For a directory, hashes every regular file
// below it in sorted relative-path order, path included.
std::string fnv1a_hex(const std::string& bytes);
std::string digest_path(const std::string& path);

// Config snapshot, versions and input digests. No timestamps, so an
// identical run writes an identical manifest.
std::string manifest_text(const RunConfig& config, const std::vector<std::string>& input_paths);
void write_manifest(const std::string& path, const RunConfig& config, const std::vector<std::string>& input_paths);

}  // namespace tabletitle::cli
