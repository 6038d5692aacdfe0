#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tabletitle/cli/config.hpp"
#include "tabletitle/corpus/record.hpp"

namespace tabletitle::cli {

// Parses arguments (program name excluded) and dispatches. Returns 0 on
// success, 2 on a usage error, 1 when a module reports an error. Logging
// goes to `err`; `out` only receives help, version and stdout data.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_main(int argc, char** argv);

std::string version_text();

// Individual stages. Each writes its outputs plus a run manifest.
void cmd_extract(const RunConfig& config);
void cmd_aggregate(const RunConfig& config);
void cmd_split(const RunConfig& config);
void cmd_build_vocab(const RunConfig& config);
void cmd_encode(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_generate(const RunConfig& config, std::ostream& out);
void cmd_evaluate(const RunConfig& config);
void cmd_pipeline(const RunConfig& config);

// HTML pages to records, one per table. `input` is an .html file or a
// directory; a directory may hold manifest.jsonl lines of the form
// {"file", "source_url", "tables": [{"table_index", "candidate_titles",
// "title_verbatim"}]}, otherwise every *.html / *.htm file is read in name
// order. Files are processed on `jobs` threads; output order is fixed.
std::vector<corpus::DatasetRecord> extract_records(const std::string& input, std::size_t jobs);

}  // namespace tabletitle::cli
