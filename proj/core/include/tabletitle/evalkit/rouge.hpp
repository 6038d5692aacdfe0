#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace tabletitle::evalkit {

using TokenSpan = std::span<const std::string>;

// F1 over clipped n-gram multiset matches. 0 when either side has no
// n-grams or nothing overlaps.
double rouge_n(TokenSpan candidate, TokenSpan reference, std::size_t n);

// Longest common subsequence length.
std::size_t lcs_length(TokenSpan a, TokenSpan b);

// F1 from the LCS length.
double rouge_l(TokenSpan candidate, TokenSpan reference);

struct RougeScores {
  double rouge1 = 0;
  double rouge2 = 0;
  double rougeL = 0;
};

RougeScores score(TokenSpan candidate, TokenSpan reference);

}  // namespace tabletitle::evalkit
