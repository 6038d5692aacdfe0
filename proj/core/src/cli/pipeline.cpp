#include <filesystem>
#include <sstream>

#include <spdlog/spdlog.h>

#include "tabletitle/cli/run.hpp"
#include "tabletitle/decoder/generate.hpp"
#include "tabletitle/error.hpp"

namespace tabletitle::cli {

namespace fs = std::filesystem;

void cmd_pipeline(const RunConfig& c) {
  if (c.workdir.empty()) throw Error(ErrorCode::Usage, "missing --workdir");
  const fs::path work(c.workdir);
  fs::create_directories(work);
  auto at = [&](const char* name) { return (work / name).string(); };
  auto stage = [&](const char* command) {
    RunConfig s = c;
    s.command = command;
    s.inputs.clear();
    s.output.clear();
    spdlog::info("== {}", command);
    return s;
  };

  RunConfig s = stage("extract");
  s.inputs = {c.inputs.at(0)};
  s.output = at("extracted.jsonl");
  cmd_extract(s);

  s = stage("dataset aggregate");
  s.inputs = {at("extracted.jsonl")};
  s.output = at("aggregated.jsonl");
  cmd_aggregate(s);

  s = stage("dataset split");
  s.inputs = {at("aggregated.jsonl")};
  s.output = at("dataset.jsonl");
  cmd_split(s);

  s = stage("dataset build-vocab");
  s.inputs = {at("dataset.jsonl")};
  s.output = at("vocab.txt");
  cmd_build_vocab(s);

  s = stage("train");
  s.data = at("dataset.jsonl");
  s.vocab = at("vocab.txt");
  s.output = at("model");
  s.mode = "copy_generate";
  cmd_train(s);

  std::vector<std::string> predictions;
  for (auto mode : {seqmodel::GenMode::CopyGenerate, seqmodel::GenMode::CopyOnly, seqmodel::GenMode::GenerateOnly}) {
    s = stage("generate");
    s.mode = std::string(decoder::mode_name(mode));
    s.checkpoint = (work / "model" / "checkpoint.bin").string();
    s.vocab = at("vocab.txt");
    s.inputs = {at("dataset.jsonl")};
    s.split = "test";
    s.output = (work / ("predictions." + s.mode + ".jsonl")).string();
    std::ostringstream unused;
    cmd_generate(s, unused);
    predictions.push_back(s.output);
  }

  s = stage("evaluate");
  s.inputs = predictions;
  s.references = at("dataset.jsonl");
  s.split = "test";
  s.baselines = true;
  s.output = at("report.tsv");
  cmd_evaluate(s);

  write_manifest(at("manifest.txt"), c, {c.inputs.at(0)});
}

}  // namespace tabletitle::cli
