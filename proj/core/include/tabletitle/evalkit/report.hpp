#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tabletitle/evalkit/rouge.hpp"

namespace tabletitle::evalkit {

struct SystemPredictions {
  std::string name;
  std::vector<std::string> titles;  // one per reference, plain text
};

struct ExampleRow {
  RougeScores scores;
  bool empty_prediction = false;
};

struct SystemReport {
  std::string name;
  std::vector<ExampleRow> rows;
  RougeScores mean;
  std::size_t n = 0;
  std::size_t n_empty = 0;
};

struct EvalReport {
  std::vector<SystemReport> systems;  // input order
};

// Titles are tokenized with the corpus tokenizer before scoring. Per-example
// work is spread over `jobs` threads; means are reduced in example order.
// Throws Error(LengthMismatch) when a system's title count differs from the
// reference count.
EvalReport evaluate(std::span<const SystemPredictions> systems, std::span<const std::string> references,
                    std::size_t jobs = 1);

// Columns: system, rouge1, rouge2, rougeL, n, n_empty.
std::string report_tsv(const EvalReport& report);
void write_report_tsv(const EvalReport& report, const std::string& path);

// Fixed-width comparison table for terminals.
std::string render_table(const EvalReport& report);

}  // namespace tabletitle::evalkit
