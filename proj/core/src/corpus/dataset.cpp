#include "tabletitle/corpus/dataset.hpp"

#include <numeric>

#include "tabletitle/corpus/tokenize.hpp"
#include "tabletitle/error.hpp"
#include "tabletitle/random.hpp"

namespace tabletitle::corpus {

const std::string& aggregate_titles(std::span<const std::string> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyCandidates, "no candidate titles to aggregate");

  std::size_t best = candidates.size();
  std::size_t best_votes = 1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::size_t votes = 0;
    for (const auto& other : candidates) votes += other == candidates[i];
    if (votes > best_votes) {
      best = i;
      best_votes = votes;
    }
  }
  if (best != candidates.size()) return candidates[best];

  best = 0;
  std::size_t best_len = tokenize(candidates[0]).size();
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const std::size_t len = tokenize(candidates[i]).size();
    if (len > best_len) {
      best = i;
      best_len = len;
    }
  }
  return candidates[best];
}

SplitCounts split_counts(std::size_t n) {
  SplitCounts c;
  c.validation = n / 10;
  c.test = n / 10;
  c.train = n - c.validation - c.test;
  return c;
}

void split_dataset(std::vector<DatasetRecord>& records, std::uint64_t seed) {
  if (records.size() < 10)
    throw Error(ErrorCode::TooFewRecords,
                "need at least 10 records to split, got " + std::to_string(records.size()));
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());
  const SplitCounts counts = split_counts(records.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    Split s = Split::Train;
    if (k >= counts.train + counts.validation) {
      s = Split::Test;
    } else if (k >= counts.train) {
      s = Split::Validation;
    }
    records[order[k]].split = s;
  }
}

std::vector<DatasetRecord> select_split(std::span<const DatasetRecord> records, Split split) {
  std::vector<DatasetRecord> out;
  for (const auto& r : records)
    if (r.split == split) out.push_back(r);
  return out;
}

}  // namespace tabletitle::corpus
