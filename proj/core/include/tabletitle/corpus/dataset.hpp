#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tabletitle/corpus/record.hpp"

namespace tabletitle::corpus {

// Majority title (exact match, at least two votes) if any; otherwise the
// candidate with the most tokens. Ties go to the earliest candidate.
const std::string& aggregate_titles(std::span<const std::string> candidates);

struct SplitCounts {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

// 80/10/10 by count, remainders to train.
SplitCounts split_counts(std::size_t n);

// Deterministic shuffle by seed, then labels in place; record order is kept.
void split_dataset(std::vector<DatasetRecord>& records, std::uint64_t seed);

std::vector<DatasetRecord> select_split(std::span<const DatasetRecord> records, Split split);

}  // namespace tabletitle::corpus
