#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tabletitle/corpus/vocab.hpp"
#include "tabletitle/seqmodel/model.hpp"

namespace tabletitle::decoder {

using corpus::TokenId;

struct BeamOptions {
  std::size_t beam = 8;
  std::size_t min_len = 4;  // STOP is masked until this many tokens exist
  std::size_t max_len = 20;
  bool renormalize = true;        // rescale to sum 1 after masking
  bool no_repeat = true;          // zero every already-emitted id
  bool mask_markers_unk = false;  // also forbid UNK and field markers
};

// Probabilities over the extended space, in double.
using Distribution = Eigen::VectorXd;

// Applies the decode-time masks to one step's P_final. `step` is the number
// of tokens already emitted. PAD and START are always masked; STOP is never
// subject to the no-repeat rule. Returns nullopt when no mass survives.
std::optional<Distribution> mask_step_distribution(const Distribution& p_final, std::span<const TokenId> emitted,
                                                   std::size_t step, const BeamOptions& options);

struct Hypothesis {
  std::vector<TokenId> tokens;  // extended ids; ends with STOP when finished
  double log_prob = 0;          // sum of log masked P_final over tokens
  double score = 0;             // log_prob / tokens.size()
  bool finished = false;        // ended on STOP rather than forced at max_len

  // Tokens without a trailing STOP.
  std::span<const TokenId> title_ids() const;
};

struct BeamResult {
  Hypothesis best;
  std::vector<Hypothesis> completed;  // best first
  std::size_t dead_ends = 0;
};

// Throws Error(Usage) on beam 0 or min_len > max_len, and Error(EmptySource)
// on an empty source.
template <typename S>
BeamResult beam_search(const seqmodel::Params<S>& params, const corpus::EncodedExample& source,
                       const seqmodel::ModelOptions& model, const BeamOptions& options = {});

// Ordering used for the final choice: higher score first, then smaller ids.
bool better(const Hypothesis& a, const Hypothesis& b);

}  // namespace tabletitle::decoder
