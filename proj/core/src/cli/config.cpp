#include "tabletitle/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tabletitle/error.hpp"

namespace tabletitle::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string fmt_double(double d) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, r.ptr);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::Usage, key + ": expected a boolean, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw Error(ErrorCode::Usage, key + ": cannot parse '" + v + "'");
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

struct Binding {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <typename T>
Binding size_binding(std::string key, T RunConfig::*outer, std::size_t T::*field) {
  return {key, [=](const RunConfig& c) { return std::to_string(c.*outer.*field); },
          [=](RunConfig& c, const std::string& v) { c.*outer.*field = parse_number<std::size_t>(key, v); }};
}

template <typename T>
Binding double_binding(std::string key, T RunConfig::*outer, double T::*field) {
  return {key, [=](const RunConfig& c) { return fmt_double(c.*outer.*field); },
          [=](RunConfig& c, const std::string& v) { c.*outer.*field = parse_number<double>(key, v); }};
}

template <typename T>
Binding bool_binding(std::string key, T RunConfig::*outer, bool T::*field) {
  return {key, [=](const RunConfig& c) { return fmt_bool(c.*outer.*field); },
          [=](RunConfig& c, const std::string& v) { c.*outer.*field = parse_bool(key, v); }};
}

Binding string_binding(std::string key, std::string RunConfig::*field) {
  return {key, [=](const RunConfig& c) { return c.*field; },
          [=](RunConfig& c, const std::string& v) { c.*field = v; }};
}

Binding flag_binding(std::string key, bool RunConfig::*field) {
  return {key, [=](const RunConfig& c) { return fmt_bool(c.*field); },
          [=](RunConfig& c, const std::string& v) { c.*field = parse_bool(key, v); }};
}

const std::vector<Binding>& bindings() {
  using H = seqmodel::Hyperparams;
  using F = corpus::FieldConfig;
  using B = decoder::BeamOptions;
  static const std::vector<Binding> table = {
      string_binding("command", &RunConfig::command),
      {"input", [](const RunConfig& c) { return join_list(c.inputs); },
       [](RunConfig& c, const std::string& v) { c.inputs = split_list(v); }},
      string_binding("out", &RunConfig::output),
      string_binding("vocab", &RunConfig::vocab),
      string_binding("checkpoint", &RunConfig::checkpoint),
      string_binding("data", &RunConfig::data),
      string_binding("references", &RunConfig::references),
      string_binding("workdir", &RunConfig::workdir),
      string_binding("split", &RunConfig::split),
      string_binding("mode", &RunConfig::mode),
      size_binding("embedding-dim", &RunConfig::hyper, &H::embedding_dim),
      size_binding("hidden-dim", &RunConfig::hyper, &H::hidden_dim),
      double_binding("lr", &RunConfig::hyper, &H::learning_rate),
      double_binding("clip", &RunConfig::hyper, &H::gradient_clip),
      size_binding("batch", &RunConfig::hyper, &H::batch_size),
      size_binding("max-source-len", &RunConfig::hyper, &H::max_source_len),
      double_binding("init-magnitude", &RunConfig::hyper, &H::init_magnitude),
      double_binding("accumulator-init", &RunConfig::hyper, &H::accumulator_init),
      size_binding("patience", &RunConfig::hyper, &H::patience),
      {"seed", [](const RunConfig& c) { return std::to_string(c.hyper.seed); },
       [](RunConfig& c, const std::string& v) { c.hyper.seed = parse_number<std::uint64_t>("seed", v); }},
      bool_binding("gen-bias", &RunConfig::hyper, &H::gen_bias),
      size_binding("eval-interval", &RunConfig::hyper, &H::eval_interval),
      size_binding("max-epochs", &RunConfig::hyper, &H::max_epochs),
      double_binding("target-loss", &RunConfig::hyper, &H::target_loss),
      bool_binding("field-page-title", &RunConfig::fields, &F::page_title),
      bool_binding("field-section-headings", &RunConfig::fields, &F::section_headings),
      bool_binding("field-captions", &RunConfig::fields, &F::captions),
      bool_binding("field-spanning-headers", &RunConfig::fields, &F::spanning_headers),
      bool_binding("field-column-headers", &RunConfig::fields, &F::column_headers),
      bool_binding("field-prefix-suffix", &RunConfig::fields, &F::prefix_suffix),
      bool_binding("field-table-rows", &RunConfig::fields, &F::table_rows),
      size_binding("beam", &RunConfig::beam, &B::beam),
      size_binding("min-len", &RunConfig::beam, &B::min_len),
      size_binding("max-len", &RunConfig::beam, &B::max_len),
      bool_binding("renormalize", &RunConfig::beam, &B::renormalize),
      bool_binding("no-repeat", &RunConfig::beam, &B::no_repeat),
      bool_binding("mask-markers-unk", &RunConfig::beam, &B::mask_markers_unk),
      flag_binding("debug-oov", &RunConfig::debug_oov),
      flag_binding("dedup-surface", &RunConfig::dedup_surface),
      flag_binding("baselines", &RunConfig::baselines),
      {"jobs", [](const RunConfig& c) { return std::to_string(c.jobs); },
       [](RunConfig& c, const std::string& v) { c.jobs = parse_number<std::size_t>("jobs", v); }},
      string_binding("log-level", &RunConfig::log_level),
  };
  return table;
}

}  // namespace

void RunConfig::sync() { fields.max_tokens = hyper.max_source_len; }

ConfigEntries config_entries(const RunConfig& config) {
  ConfigEntries out;
  for (const auto& b : bindings()) out.emplace_back(b.key, b.get(config));
  return out;
}

void apply_entry(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& b : bindings()) {
    if (b.key == key) {
      b.set(config, value);
      config.sync();
      return;
    }
  }
  throw Error(ErrorCode::Usage, "unknown config key '" + key + "'");
}

std::vector<std::string> apply_entries(RunConfig& config, const ConfigEntries& entries) {
  std::vector<std::string> ignored;
  for (const auto& [key, value] : entries) {
    bool known = false;
    for (const auto& b : bindings()) known = known || b.key == key;
    if (!known || key == "command") {
      ignored.push_back(key);
      continue;
    }
    apply_entry(config, key, value);
  }
  return ignored;
}

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::BadFormat, "config line " + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)));
  }
  return out;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace tabletitle::cli
