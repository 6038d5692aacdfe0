#include "tabletitle/cli/run.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "tabletitle/corpus/dataset.hpp"
#include "tabletitle/decoder/generate.hpp"
#include "tabletitle/error.hpp"
#include "tabletitle/evalkit/baselines.hpp"
#include "tabletitle/evalkit/report.hpp"
#include "tabletitle/extractor/extract.hpp"
#include "tabletitle/seqmodel/train.hpp"

namespace tabletitle::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::Usage, std::string("missing ") + flag);
}

const std::string& single_input(const RunConfig& c) {
  if (c.inputs.size() != 1) throw Error(ErrorCode::Usage, "expected exactly one --input");
  return c.inputs.front();
}

std::string file_manifest(const std::string& output) { return output + ".manifest.txt"; }

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

bool is_html_path(const std::string& path) {
  const std::string ext = fs::path(path).extension().string();
  return ext == ".html" || ext == ".htm";
}

std::vector<corpus::DatasetRecord> filter_split(std::vector<corpus::DatasetRecord> records,
                                                const std::string& split) {
  if (split.empty()) return records;
  return corpus::select_split(records, corpus::parse_split(split));
}

// Runs f(i) for i in [0, n) on up to `jobs` threads. The first exception,
// by index, is rethrown after all workers finish.
template <typename F>
void parallel_for(std::size_t n, std::size_t jobs, F&& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct PageJob {
  std::string path;
  std::string source_url;
  json tables = json::array();
};

}  // namespace

std::string version_text() {
  return "tabletitle " TABLETITLE_VERSION " (checkpoint format " + std::to_string(seqmodel::kCheckpointVersion) + ")";
}

std::vector<corpus::DatasetRecord> extract_records(const std::string& input, std::size_t jobs) {
  std::vector<PageJob> pages;
  const bool directory = fs::is_directory(input);
  if (directory) {
    const fs::path manifest = fs::path(input) / "manifest.jsonl";
    if (fs::exists(manifest)) {
      std::istringstream lines(read_file(manifest.string()));
      std::string line;
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
          obj = json::parse(line);
        } catch (const json::exception& e) {
          throw Error(ErrorCode::BadFormat, "manifest.jsonl: " + std::string(e.what()));
        }
        PageJob job;
        job.path = (fs::path(input) / obj.value("file", "")).string();
        job.source_url = obj.value("source_url", obj.value("file", ""));
        if (obj.contains("tables")) job.tables = obj["tables"];
        pages.push_back(std::move(job));
      }
    } else {
      std::vector<std::string> files;
      for (const auto& e : fs::directory_iterator(input))
        if (e.is_regular_file() && is_html_path(e.path().string())) files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      for (auto& f : files) pages.push_back({f, fs::path(f).filename().string(), json::array()});
    }
  } else {
    if (!fs::exists(input)) throw Error(ErrorCode::IoError, "no such input " + input);
    pages.push_back({input, fs::path(input).filename().string(), json::array()});
  }

  std::vector<std::vector<corpus::DatasetRecord>> per_page(pages.size());
  parallel_for(pages.size(), jobs, [&](std::size_t i) {
    const PageJob& page = pages[i];
    extractor::DocumentTree doc;
    try {
      doc = extractor::parse_document(read_file(page.path));
    } catch (const Error& e) {
      if (directory && e.code() == ErrorCode::EmptyDocument) {
        spdlog::warn("skipping empty document {}", page.path);
        return;
      }
      throw;
    }
    for (auto& ctx : extractor::extract_all(doc, page.source_url)) {
      corpus::DatasetRecord rec;
      rec.context = std::move(ctx);
      for (const auto& t : page.tables) {
        if (t.value("table_index", std::size_t{0}) != rec.context.table_index) continue;
        rec.candidate_titles = t.value("candidate_titles", std::vector<std::string>{});
        rec.title_verbatim = t.value("title_verbatim", false);
        rec.accepted_title = t.value("title", std::string{});
      }
      per_page[i].push_back(std::move(rec));
    }
  });
  std::vector<corpus::DatasetRecord> out;
  for (auto& v : per_page)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

void cmd_extract(const RunConfig& c) {
  const std::string& input = single_input(c);
  require(c.output, "--out");
  auto records = extract_records(input, c.jobs);
  for (auto& r : records) {
    if (!c.fields.table_rows) r.context.table_rows.clear();
    if (!c.fields.prefix_suffix) {
      r.context.prefix_text.clear();
      r.context.suffix_text.clear();
    }
  }
  ensure_parent(c.output);
  corpus::write_dataset_file(c.output, records);
  write_manifest(file_manifest(c.output), c, {input});
  spdlog::info("extracted {} tables from {}", records.size(), input);
}

void cmd_aggregate(const RunConfig& c) {
  const std::string& input = single_input(c);
  require(c.output, "--out");
  std::vector<corpus::DatasetRecord> kept;
  std::size_t dropped = 0;
  for (auto& r : corpus::read_dataset_file(input)) {
    if (!r.candidate_titles.empty()) {
      r.accepted_title = corpus::aggregate_titles(r.candidate_titles);
    } else if (r.accepted_title.empty()) {
      ++dropped;
      continue;
    }
    kept.push_back(std::move(r));
  }
  if (kept.empty()) throw Error(ErrorCode::EmptyCorpus, "no record in " + input + " has a title");
  ensure_parent(c.output);
  corpus::write_dataset_file(c.output, kept);
  write_manifest(file_manifest(c.output), c, {input});
  spdlog::info("aggregated {} records, dropped {} without candidates", kept.size(), dropped);
}

void cmd_split(const RunConfig& c) {
  const std::string& input = single_input(c);
  require(c.output, "--out");
  auto records = corpus::read_dataset_file(input);
  corpus::split_dataset(records, c.hyper.seed);
  ensure_parent(c.output);
  corpus::write_dataset_file(c.output, records);
  write_manifest(file_manifest(c.output), c, {input});
  const auto counts = corpus::split_counts(records.size());
  spdlog::info("split {} records into {}/{}/{}", records.size(), counts.train, counts.validation, counts.test);
}

static std::vector<corpus::DatasetRecord> training_records(const std::vector<corpus::DatasetRecord>& all) {
  auto train = corpus::select_split(all, corpus::Split::Train);
  if (!train.empty()) return train;
  for (const auto& r : all)
    if (r.split != corpus::Split::None) return train;
  return all;
}

void cmd_build_vocab(const RunConfig& c) {
  const std::string& input = single_input(c);
  require(c.output, "--out");
  const auto records = corpus::read_dataset_file(input);
  const auto vocab = corpus::build_vocab(training_records(records), c.fields);
  ensure_parent(c.output);
  vocab.save(c.output);
  write_manifest(file_manifest(c.output), c, {input});
  spdlog::info("vocabulary of {} entries", vocab.size());
}

void cmd_encode(const RunConfig& c) {
  const std::string& input = single_input(c);
  require(c.output, "--out");
  require(c.vocab, "--vocab");
  const auto records = filter_split(corpus::read_dataset_file(input), c.split);
  const auto vocab = corpus::Vocabulary::load(c.vocab);
  const auto encoded = corpus::encode_records(records, vocab, c.fields);
  ensure_parent(c.output);
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + c.output);
  for (std::size_t i = 0; i < encoded.examples.size(); ++i) {
    const auto& ex = encoded.examples[i];
    json obj;
    obj["table_index"] = records[encoded.record_index[i]].context.table_index;
    obj["source_url"] = records[encoded.record_index[i]].context.source_url;
    obj["source_ids"] = ex.source_ids;
    obj["source_extended_ids"] = ex.source_extended_ids;
    obj["oov_tokens"] = ex.oov_tokens;
    obj["target_ids"] = ex.target_ids;
    out << obj.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
  write_manifest(file_manifest(c.output), c, {input, c.vocab});
  spdlog::info("encoded {} examples, dropped {}", encoded.examples.size(), encoded.dropped);
}

void cmd_train(const RunConfig& c) {
  require(c.data, "--data");
  require(c.vocab, "--vocab");
  require(c.output, "--out");
  const auto records = corpus::read_dataset_file(c.data);
  const auto vocab = corpus::Vocabulary::load(c.vocab);
  const auto train_set = corpus::encode_records(training_records(records), vocab, c.fields);
  const auto val_set = corpus::encode_records(corpus::select_split(records, corpus::Split::Validation), vocab, c.fields);
  spdlog::info("training on {} examples, validating on {}", train_set.examples.size(), val_set.examples.size());

  seqmodel::TrainOptions options;
  options.model.mode = decoder::parse_mode(c.mode);
  options.on_evaluation = [](const seqmodel::TrainLogRow& row) {
    spdlog::info("step {:>6}  train {:.4f}  val {:.4f}", row.step, row.train_loss, row.val_loss);
  };
  const auto result = seqmodel::train(train_set.examples, val_set.examples, vocab.size(), c.hyper, options);

  fs::create_directories(c.output);
  const fs::path dir(c.output);
  seqmodel::save_checkpoint({c.hyper, result.best}, (dir / "checkpoint.bin").string());
  vocab.save((dir / "vocab.txt").string());
  seqmodel::write_train_log((dir / "train_log.tsv").string(), result.log);
  write_manifest((dir / "manifest.txt").string(), c, {c.data, c.vocab});
  spdlog::info("stopped ({}) after {} steps; best val loss {:.4f} at step {}",
               seqmodel::stop_reason_name(result.stop), result.steps, result.best_val_loss, result.best_step);
}

void cmd_generate(const RunConfig& c, std::ostream& stdout_stream) {
  require(c.checkpoint, "--checkpoint");
  const std::string& input = single_input(c);
  const std::string vocab_path =
      c.vocab.empty() ? (fs::path(c.checkpoint).parent_path() / "vocab.txt").string() : c.vocab;
  const auto checkpoint = seqmodel::load_checkpoint(c.checkpoint);
  const auto vocab = corpus::Vocabulary::load(vocab_path);

  std::vector<extractor::TableContext> contexts;
  if (is_html_path(input)) {
    contexts = extractor::extract_all(extractor::parse_document(read_file(input)), fs::path(input).filename().string());
  } else {
    for (auto& r : filter_split(corpus::read_dataset_file(input), c.split)) contexts.push_back(std::move(r.context));
  }

  decoder::GenerateOptions options;
  options.mode = decoder::parse_mode(c.mode);
  options.beam = c.beam;
  options.fields = c.fields;
  options.debug_oov = c.debug_oov;
  options.dedup_surface = c.dedup_surface;

  std::vector<std::string> lines(contexts.size());
  parallel_for(contexts.size(), c.jobs, [&](std::size_t i) {
    json obj;
    obj["table_index"] = contexts[i].table_index;
    obj["mode"] = c.mode;
    try {
      const auto title = decoder::generate_title(checkpoint, vocab, contexts[i], options);
      obj["title"] = title.title;
      obj["score"] = title.score;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyInput) throw;
      obj["title"] = "";
      obj["score"] = 0.0;
    }
    lines[i] = obj.dump(-1, ' ', false, json::error_handler_t::replace);
  });

  if (c.output.empty() || c.output == "-") {
    for (const auto& l : lines) stdout_stream << l << '\n';
  } else {
    ensure_parent(c.output);
    std::ofstream out(c.output, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + c.output);
    for (const auto& l : lines) out << l << '\n';
    write_manifest(file_manifest(c.output), c, {c.checkpoint, vocab_path, input});
  }
  spdlog::info("generated {} titles ({})", lines.size(), c.mode);
}

void cmd_evaluate(const RunConfig& c) {
  require(c.references, "--references");
  require(c.output, "--out");
  const auto refs = filter_split(corpus::read_dataset_file(c.references), c.split);
  std::vector<std::string> references;
  for (const auto& r : refs) references.push_back(r.accepted_title);

  std::vector<evalkit::SystemPredictions> systems;
  for (const auto& path : c.inputs) {
    evalkit::SystemPredictions sys;
    std::istringstream lines(read_file(path));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::BadFormat, path + ": " + e.what());
      }
      if (sys.name.empty()) sys.name = obj.value("mode", "");
      sys.titles.push_back(obj.value("title", ""));
    }
    if (sys.name.empty()) sys.name = fs::path(path).stem().string();
    for (const auto& other : systems)
      if (other.name == sys.name) sys.name += ":" + fs::path(path).stem().string();
    systems.push_back(std::move(sys));
  }
  if (c.baselines) {
    evalkit::SystemPredictions page{"page_title", {}}, heading{"section_heading", {}};
    for (const auto& r : refs) {
      page.titles.push_back(evalkit::baseline_page_title(r.context));
      heading.titles.push_back(evalkit::baseline_section_heading(r.context));
    }
    systems.push_back(std::move(page));
    systems.push_back(std::move(heading));
  }
  if (systems.empty()) throw Error(ErrorCode::Usage, "nothing to evaluate: give --predictions or --baselines");

  const auto report = evalkit::evaluate(systems, references, c.jobs);
  ensure_parent(c.output);
  evalkit::write_report_tsv(report, c.output);
  std::vector<std::string> inputs = c.inputs;
  inputs.push_back(c.references);
  write_manifest(file_manifest(c.output), c, inputs);
  std::istringstream table(evalkit::render_table(report));
  for (std::string line; std::getline(table, line);) spdlog::info("{}", line);
}

namespace {

void add_field_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--field-page-title", c.fields.page_title, "use the page title")->group("Fields");
  sub->add_option("--field-section-headings", c.fields.section_headings, "use section headings")->group("Fields");
  sub->add_option("--field-captions", c.fields.captions, "use captions")->group("Fields");
  sub->add_option("--field-spanning-headers", c.fields.spanning_headers, "use spanning headers")->group("Fields");
  sub->add_option("--field-column-headers", c.fields.column_headers, "use column headers")->group("Fields");
  sub->add_option("--field-prefix-suffix", c.fields.prefix_suffix, "use text around the table")->group("Fields");
  sub->add_option("--field-table-rows", c.fields.table_rows, "use table rows")->group("Fields");
  sub->add_option("--max-source-len", c.hyper.max_source_len, "truncate the input sequence")->group("Fields");
}

void add_train_options(CLI::App* sub, RunConfig& c) {
  auto& h = c.hyper;
  sub->add_option("--seed", h.seed, "random seed");
  sub->add_option("--lr", h.learning_rate, "Adagrad learning rate")->group("Training");
  sub->add_option("--clip", h.gradient_clip, "global gradient norm clip")->group("Training");
  sub->add_option("--batch", h.batch_size, "mini-batch size")->group("Training");
  sub->add_option("--patience", h.patience, "evaluations without improvement before stopping")->group("Training");
  sub->add_option("--embedding-dim", h.embedding_dim, "word embedding size")->group("Training");
  sub->add_option("--hidden-dim", h.hidden_dim, "LSTM state size")->group("Training");
  sub->add_option("--init-magnitude", h.init_magnitude, "uniform init range +-m")->group("Training");
  sub->add_option("--accumulator-init", h.accumulator_init, "initial Adagrad accumulator")->group("Training");
  sub->add_option("--eval-interval", h.eval_interval, "steps between validation passes, 0 = per epoch")
      ->group("Training");
  sub->add_option("--max-epochs", h.max_epochs, "hard cap on passes over the data")->group("Training");
  sub->add_option("--target-loss", h.target_loss, "stop once validation loss reaches this, 0 = off")
      ->group("Training");
  sub->add_flag_callback("--no-gen-bias", [&c] { c.hyper.gen_bias = false; }, "drop the bias inside p_gen")
      ->group("Training");
}

void add_beam_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--beam", c.beam.beam, "beam width")->group("Decoding");
  sub->add_option("--min-len", c.beam.min_len, "STOP is masked before this many tokens")->group("Decoding");
  sub->add_option("--max-len", c.beam.max_len, "hypotheses are cut at this length")->group("Decoding");
  sub->add_flag_callback("--no-renormalize", [&c] { c.beam.renormalize = false; },
                         "keep the masked distribution unnormalised")
      ->group("Decoding");
  sub->add_flag_callback("--allow-repeat", [&c] { c.beam.no_repeat = false; }, "disable the no-repeat mask")
      ->group("Decoding");
  sub->add_flag("--mask-markers-unk", c.beam.mask_markers_unk, "never emit UNK or field markers")->group("Decoding");
  sub->add_flag_callback("--no-dedup-surface", [&c] { c.dedup_surface = false; },
                         "keep repeated surface forms")
      ->group("Decoding");
}

void add_jobs(CLI::App* sub, RunConfig& c) {
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("tabletitle", sink);
  logger->set_pattern("[%l] %v");
  auto previous = spdlog::default_logger();
  spdlog::set_default_logger(logger);
  struct Restore {
    std::shared_ptr<spdlog::logger> logger;
    ~Restore() { spdlog::set_default_logger(logger); }
  } restore{previous};

  RunConfig c;
  CLI::App app{"Table title generation: extraction, datasets, training, decoding and scoring.", "tabletitle"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags win");
  app.add_option("--log-level", c.log_level, "trace, debug, info, warn, error, off");

  auto* extract = app.add_subcommand("extract", "HTML pages to a dataset file, one record per table");
  extract->add_option("--input", c.inputs, "page or directory of pages")->required()->expected(1);
  extract->add_option("--out,--output", c.output, "dataset file to write")->required();
  extract->add_flag("--include-rows", c.fields.table_rows, "keep table rows in the records");
  extract->add_flag("--include-prefix-suffix", c.fields.prefix_suffix, "keep the text around each table");
  add_jobs(extract, c);

  auto* dataset = app.add_subcommand("dataset", "dataset preparation");
  dataset->require_subcommand(1);
  auto* aggregate = dataset->add_subcommand("aggregate", "pick one title per table from the candidates");
  auto* split = dataset->add_subcommand("split", "label 80/10/10 train/validation/test");
  auto* build_vocab = dataset->add_subcommand("build-vocab", "vocabulary from the training split");
  auto* encode = dataset->add_subcommand("encode", "id sequences for inspection");
  for (auto* sub : {aggregate, split, build_vocab, encode}) {
    sub->add_option("--input", c.inputs, "dataset file")->required()->expected(1);
    sub->add_option("--out", c.output, "file to write")->required();
  }
  split->add_option("--seed", c.hyper.seed, "shuffle seed");
  add_field_options(build_vocab, c);
  add_field_options(encode, c);
  encode->add_option("--vocab", c.vocab, "vocabulary file")->required();
  encode->add_option("--split", c.split, "train, validation or test");

  auto* train = app.add_subcommand("train", "fit a model with early stopping");
  train->add_option("--data", c.data, "split dataset file")->required();
  train->add_option("--vocab", c.vocab, "vocabulary file")->required();
  train->add_option("--out", c.output, "output directory")->required();
  train->add_option("--mode", c.mode, "copy_generate, copy_only or generate_only");
  add_train_options(train, c);
  add_field_options(train, c);

  auto* generate = app.add_subcommand("generate", "decode titles with beam search");
  generate->add_option("--checkpoint", c.checkpoint, "checkpoint.bin from train")->required();
  generate->add_option("--vocab", c.vocab, "defaults to vocab.txt beside the checkpoint");
  generate->add_option("--input", c.inputs, "dataset file or HTML page")->required()->expected(1);
  generate->add_option("--mode", c.mode, "copy_generate, copy_only or generate_only");
  generate->add_option("--split", c.split, "only records of this split");
  generate->add_option("--out", c.output, "output file, - for stdout");
  generate->add_flag("--debug-oov", c.debug_oov, "render copied OOV tokens as __token__");
  add_beam_options(generate, c);
  add_field_options(generate, c);
  add_jobs(generate, c);

  auto* evaluate = app.add_subcommand("evaluate", "ROUGE-1/2/L against reference titles");
  evaluate->add_option("--predictions", c.inputs, "generate output files");
  evaluate->add_option("--references", c.references, "dataset file")->required();
  evaluate->add_option("--out", c.output, "report.tsv")->required();
  evaluate->add_option("--split", c.split, "only reference records of this split");
  evaluate->add_flag("--baselines", c.baselines, "also score the page-title and section-heading baselines");
  add_jobs(evaluate, c);

  auto* pipeline = app.add_subcommand("pipeline", "extract, prepare, train, generate and evaluate");
  pipeline->add_option("--input", c.inputs, "directory of pages")->required()->expected(1);
  pipeline->add_option("--workdir", c.workdir, "directory for every stage's outputs")->required();
  add_train_options(pipeline, c);
  add_beam_options(pipeline, c);
  add_field_options(pipeline, c);
  add_jobs(pipeline, c);

  std::vector<std::string> argv_storage{"tabletitle"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    if (const std::string path = find_config_path(args); !path.empty()) {
      for (const auto& key : apply_entries(c, read_config_file(path)))
        if (key.rfind("digest.", 0) != 0 && key != "tabletitle_version" && key != "checkpoint_format" &&
            key != "command")
          spdlog::warn("ignoring config key '{}'", key);
    }
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    CLI::App* active = &app;
    for (bool descended = true; descended;) {
      descended = false;
      for (auto* sub : active->get_subcommands()) {
        active = sub;
        descended = true;
        break;
      }
    }
    err << "error: Usage: " << e.what() << "\n" << active->help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return e.code() == ErrorCode::Usage ? 2 : 1;
  }

  c.sync();
  logger->set_level(spdlog::level::from_str(c.log_level));
  try {
    if (extract->parsed()) {
      c.command = "extract";
      cmd_extract(c);
    } else if (aggregate->parsed()) {
      c.command = "dataset aggregate";
      cmd_aggregate(c);
    } else if (split->parsed()) {
      c.command = "dataset split";
      cmd_split(c);
    } else if (build_vocab->parsed()) {
      c.command = "dataset build-vocab";
      cmd_build_vocab(c);
    } else if (encode->parsed()) {
      c.command = "dataset encode";
      cmd_encode(c);
    } else if (train->parsed()) {
      c.command = "train";
      cmd_train(c);
    } else if (generate->parsed()) {
      c.command = "generate";
      cmd_generate(c, out);
    } else if (evaluate->parsed()) {
      c.command = "evaluate";
      cmd_evaluate(c);
    } else if (pipeline->parsed()) {
      c.command = "pipeline";
      cmd_pipeline(c);
    }
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: IoError: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace tabletitle::cli
