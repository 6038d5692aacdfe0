#include "tabletitle/evalkit/rouge.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace tabletitle::evalkit {

namespace {

double f1(double matches, double candidate_total, double reference_total) {
  if (matches <= 0 || candidate_total <= 0 || reference_total <= 0) return 0.0;
  const double p = matches / candidate_total;
  const double r = matches / reference_total;
  return 2 * p * r / (p + r);
}

std::map<std::vector<std::string>, std::size_t> ngrams(TokenSpan tokens, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (n == 0 || tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

}  // namespace

double rouge_n(TokenSpan candidate, TokenSpan reference, std::size_t n) {
  if (n == 0 || candidate.size() < n || reference.size() < n) return 0.0;
  const auto cand = ngrams(candidate, n);
  const auto ref = ngrams(reference, n);
  std::size_t matches = 0;
  for (const auto& [gram, count] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) matches += std::min(count, it->second);
  }
  return f1(static_cast<double>(matches), static_cast<double>(candidate.size() - n + 1),
            static_cast<double>(reference.size() - n + 1));
}

std::size_t lcs_length(TokenSpan a, TokenSpan b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(TokenSpan candidate, TokenSpan reference) {
  return f1(static_cast<double>(lcs_length(candidate, reference)), static_cast<double>(candidate.size()),
            static_cast<double>(reference.size()));
}

RougeScores score(TokenSpan candidate, TokenSpan reference) {
  return {rouge_n(candidate, reference, 1), rouge_n(candidate, reference, 2), rouge_l(candidate, reference)};
}

}  // namespace tabletitle::evalkit
