#include "tabletitle/evalkit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <thread>

#include "tabletitle/corpus/tokenize.hpp"
#include "tabletitle/error.hpp"

namespace tabletitle::evalkit {

EvalReport evaluate(std::span<const SystemPredictions> systems, std::span<const std::string> references,
                    std::size_t jobs) {
  for (const auto& s : systems)
    if (s.titles.size() != references.size())
      throw Error(ErrorCode::LengthMismatch, "system '" + s.name + "' has " + std::to_string(s.titles.size()) +
                                                 " predictions for " + std::to_string(references.size()) +
                                                 " references");
  std::vector<corpus::Tokens> refs(references.size());
  for (std::size_t i = 0; i < references.size(); ++i) refs[i] = corpus::tokenize(references[i]);

  EvalReport report;
  for (const auto& s : systems) {
    SystemReport sys;
    sys.name = s.name;
    sys.n = references.size();
    sys.rows.resize(sys.n);
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const corpus::Tokens cand = corpus::tokenize(s.titles[i]);
        sys.rows[i].empty_prediction = cand.empty();
        sys.rows[i].scores = score(cand, refs[i]);
      }
    };
    const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, sys.n));
    if (threads == 1) {
      work(0, sys.n);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (sys.n + threads - 1) / threads;
      for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t b = std::min(sys.n, t * chunk);
        pool.emplace_back(work, b, std::min(sys.n, b + chunk));
      }
      for (auto& th : pool) th.join();
    }
    for (const auto& row : sys.rows) {
      sys.mean.rouge1 += row.scores.rouge1;
      sys.mean.rouge2 += row.scores.rouge2;
      sys.mean.rougeL += row.scores.rougeL;
      sys.n_empty += row.empty_prediction ? 1 : 0;
    }
    if (sys.n > 0) {
      const double n = static_cast<double>(sys.n);
      sys.mean.rouge1 /= n;
      sys.mean.rouge2 /= n;
      sys.mean.rougeL /= n;
    }
    report.systems.push_back(std::move(sys));
  }
  return report;
}

std::string report_tsv(const EvalReport& report) {
  std::string out = "system\trouge1\trouge2\trougeL\tn\tn_empty\n";
  char buf[256];
  for (const auto& s : report.systems) {
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\t%.6f\t%zu\t%zu\n", s.mean.rouge1, s.mean.rouge2, s.mean.rougeL,
                  s.n, s.n_empty);
    out += s.name;
    out += buf;
  }
  return out;
}

void write_report_tsv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!(out << report_tsv(report))) throw Error(ErrorCode::IoError, "cannot write " + path);
}

std::string render_table(const EvalReport& report) {
  std::size_t width = 6;
  for (const auto& s : report.systems) width = std::max(width, s.name.size());
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-*s  %8s  %8s  %8s  %6s  %7s\n", static_cast<int>(width), "system", "ROUGE-1",
                "ROUGE-2", "ROUGE-L", "n", "empty");
  out += buf;
  for (const auto& s : report.systems) {
    std::snprintf(buf, sizeof buf, "%-*s  %8.3f  %8.3f  %8.3f  %6zu  %7zu\n", static_cast<int>(width),
                  s.name.c_str(), s.mean.rouge1, s.mean.rouge2, s.mean.rougeL, s.n, s.n_empty);
    out += buf;
  }
  return out;
}

}  // namespace tabletitle::evalkit
