#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "tabletitle/seqmodel/model.hpp"

namespace tabletitle::testing {

using corpus::TokenId;
using decoder::BeamOptions;
using decoder::Hypothesis;

template <typename S>
Hypothesis exhaustive_best(const seqmodel::Params<S>& params, const corpus::EncodedExample& source,
                           const seqmodel::ModelOptions& model, const BeamOptions& options, std::size_t* leaves) {
  const seqmodel::DecoderSession<S> session(params, source, model);
  std::vector<Hypothesis> done;
  std::function<void(Hypothesis&, const seqmodel::Vec<S>&, const seqmodel::Vec<S>&)> expand =
      [&](Hypothesis& hyp, const seqmodel::Vec<S>& h, const seqmodel::Vec<S>& c) {
        if (hyp.tokens.size() == options.max_len) {
          Hypothesis f = hyp;
          f.score = f.log_prob / static_cast<double>(f.tokens.size());
          done.push_back(f);
          return;
        }
        const TokenId input = hyp.tokens.empty() ? corpus::kStartId : hyp.tokens.back();
        const auto out = session.step(h, c, input);
        const auto masked = decoder::mask_step_distribution(out.p_final.template cast<double>(), hyp.tokens,
                                                            hyp.tokens.size(), options);
        if (!masked) return;
        for (Eigen::Index id = 0; id < masked->size(); ++id) {
          const double p = (*masked)[id];
          if (!(p > 0)) continue;
          const double saved = hyp.log_prob;
          hyp.tokens.push_back(static_cast<TokenId>(id));
          hyp.log_prob = saved + std::log(p);
          if (id == corpus::kStopId) {
            Hypothesis f = hyp;
            f.finished = true;
            f.score = f.log_prob / static_cast<double>(f.tokens.size());
            done.push_back(f);
          } else {
            expand(hyp, out.h, out.c);
          }
          hyp.tokens.pop_back();
          hyp.log_prob = saved;
        }
      };
  Hypothesis root;
  expand(root, session.initial_h(), session.initial_c());
  if (leaves) *leaves = done.size();
  if (done.empty()) return Hypothesis{};
  return *std::min_element(done.begin(), done.end(), decoder::better);
}

template <typename S>
double replay_log_prob(const seqmodel::Params<S>& params, const corpus::EncodedExample& source,
                       const seqmodel::ModelOptions& model, const BeamOptions& options,
                       std::span<const TokenId> tokens) {
  const seqmodel::DecoderSession<S> session(params, source, model);
  seqmodel::Vec<S> h = session.initial_h(), c = session.initial_c();
  double total = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const TokenId input = k == 0 ? corpus::kStartId : tokens[k - 1];
    const auto out = session.step(h, c, input);
    const auto masked =
        decoder::mask_step_distribution(out.p_final.template cast<double>(), tokens.first(k), k, options);
    if (!masked) return -INFINITY;
    total += std::log((*masked)[tokens[k]]);
    h = out.h;
    c = out.c;
  }
  return total;
}

template Hypothesis exhaustive_best<float>(const seqmodel::Params<float>&, const corpus::EncodedExample&,
                                           const seqmodel::ModelOptions&, const BeamOptions&, std::size_t*);
template Hypothesis exhaustive_best<double>(const seqmodel::Params<double>&, const corpus::EncodedExample&,
                                            const seqmodel::ModelOptions&, const BeamOptions&, std::size_t*);
template double replay_log_prob<float>(const seqmodel::Params<float>&, const corpus::EncodedExample&,
                                       const seqmodel::ModelOptions&, const BeamOptions&,
                                       std::span<const TokenId>);
template double replay_log_prob<double>(const seqmodel::Params<double>&, const corpus::EncodedExample&,
                                        const seqmodel::ModelOptions&, const BeamOptions&,
                                        std::span<const TokenId>);

namespace {

constexpr std::array<std::array<int, 3>, 6> kPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

}  // namespace

std::size_t LcsOracle::id_of(const std::vector<int>& digits) const {
  std::size_t value = 0;
  for (int d : digits) value = value * 3 + static_cast<std::size_t>(d);
  return offsets_[digits.size()] + value;
}

LcsOracle::LcsOracle(std::size_t max_len) {
  std::size_t total = 0, block = 1;
  for (std::size_t len = 0; len <= max_len; ++len, block *= 3) {
    offsets_.push_back(total);
    for (std::size_t v = 0; v < block; ++v) {
      std::vector<int> digits(len);
      std::size_t x = v;
      for (std::size_t k = len; k-- > 0; x /= 3) digits[k] = static_cast<int>(x % 3);
      std::vector<std::string> toks;
      for (int d : digits) toks.push_back(std::string(1, static_cast<char>('a' + d)));
      digits_.push_back(std::move(digits));
      tokens_.push_back(std::move(toks));
      lengths_.push_back(len);
    }
    total += block;
  }
  offsets_.push_back(total);
  const std::size_t n = total;

  mapped_.assign(kPerms.size(), std::vector<std::size_t>(n));
  for (std::size_t p = 0; p < kPerms.size(); ++p)
    for (std::size_t id = 0; id < n; ++id) {
      std::vector<int> d = digits_[id];
      for (int& x : d) x = kPerms[p][static_cast<std::size_t>(x)];
      mapped_[p][id] = id_of(d);
    }

  // Relabel by first occurrence: the first new symbol becomes 0, the next 1.
  perm_of_.resize(n);
  std::vector<std::size_t> canonical;
  std::vector<std::size_t> rank_of_id(n, SIZE_MAX);
  for (std::size_t id = 0; id < n; ++id) {
    std::array<int, 3> map{-1, -1, -1};
    int next = 0;
    for (int d : digits_[id])
      if (map[static_cast<std::size_t>(d)] < 0) map[static_cast<std::size_t>(d)] = next++;
    for (auto& m : map)
      if (m < 0) m = next++;
    for (std::size_t p = 0; p < kPerms.size(); ++p)
      if (kPerms[p] == map) perm_of_[id] = static_cast<int>(p);
    if (perm_of_[id] == 0) {
      rank_of_id[id] = canonical.size();
      canonical.push_back(id);
    }
  }
  canon_rank_.resize(n);
  for (std::size_t id = 0; id < n; ++id)
    canon_rank_[id] = rank_of_id[mapped_[static_cast<std::size_t>(perm_of_[id])][id]];

  // Subsequence sets as bitsets.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> subseq(n * words, 0);
  for (std::size_t id = 0; id < n; ++id) {
    const auto& d = digits_[id];
    for (std::size_t mask = 0; mask < (std::size_t{1} << d.size()); ++mask) {
      std::vector<int> s;
      for (std::size_t k = 0; k < d.size(); ++k)
        if (mask >> k & 1) s.push_back(d[k]);
      const std::size_t sid = id_of(s);
      subseq[id * words + sid / 64] |= std::uint64_t{1} << (sid % 64);
    }
  }

  table_.assign(canonical.size() * n, 0);
  for (std::size_t r = 0; r < canonical.size(); ++r) {
    // Distinct subsequences of the canonical sequence, longest first.
    std::vector<std::size_t> subs;
    for (std::size_t w = 0; w < words; ++w)
      for (std::uint64_t bits = subseq[canonical[r] * words + w]; bits; bits &= bits - 1)
        subs.push_back(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
    std::sort(subs.rbegin(), subs.rend());
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t s : subs)
        if (subseq[b * words + s / 64] >> (s % 64) & 1) {
          table_[r * n + b] = static_cast<std::uint8_t>(lengths_[s]);
          break;
        }
  }
}

std::size_t LcsOracle::lcs(std::size_t a, std::size_t b) const {
  const auto p = static_cast<std::size_t>(perm_of_[a]);
  return table_[canon_rank_[a] * count() + mapped_[p][b]];
}

const std::vector<RougeCase>& rouge_n_cases() {
  // F1 = 2PR / (P + R) = 2m / (c + r) for m clipped matches, c candidate
  // n-grams and r reference n-grams.
  static const std::vector<RougeCase> cases = {
      {"the cat sat", "the cat", 1, 0.8},
      {"the cat sat", "the cat", 2, 2.0 / 3.0},
      {"a b c", "a b c", 1, 1.0},
      {"a b c", "a b c", 2, 1.0},
      {"a b", "c d", 1, 0.0},
      {"a a a", "a", 1, 0.5},
      {"a a", "a a a", 1, 0.8},
      {"", "a", 1, 0.0},
      {"a", "", 1, 0.0},
      {"a", "a", 2, 0.0},
      {"a b a b", "a b", 2, 0.5},
      {"a b a b", "b a", 2, 0.5},
      {"x y z", "z y x", 1, 1.0},
      {"x y z", "z y x", 2, 0.0},
      {"list of mayors of paris", "list of paris mayors", 1, 8.0 / 9.0},
      {"list of mayors of paris", "list of paris mayors", 2, 4.0 / 7.0},
      {"a b c d e", "a c e", 1, 0.75},
      {"a b c d e", "a c e", 2, 0.0},
      {"the the the the", "the the", 2, 0.5},
      {"new york city", "new york", 2, 2.0 / 3.0},
  };
  return cases;
}

}  // namespace tabletitle::testing
