#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tabletitle/corpus/encode.hpp"
#include "tabletitle/corpus/vocab.hpp"
#include "tabletitle/seqmodel/params.hpp"

namespace tabletitle::seqmodel {

using corpus::EncodedExample;
using corpus::TokenId;

// How the copy/generate switch is computed. The two forced modes pin p_gen
// to 0 (copy only) or 1 (generate only).
enum class GenMode { CopyGenerate, CopyOnly, GenerateOnly };

struct ModelOptions {
  GenMode mode = GenMode::CopyGenerate;
  bool gen_bias = true;
  double prob_floor = 1e-12;  // lower clamp inside -log P
};

// ---- forward building blocks ----

template <typename S>
struct LstmCache {
  Mat<S> x;      // inputs, one column per step
  Mat<S> gates;  // 4H x n, after the nonlinearities
  Mat<S> c;      // cell states
  Mat<S> h;      // hidden states
  Mat<S> tanh_c;
  Vec<S> h0, c0;
};

template <typename S>
LstmCache<S> lstm_forward(const LstmWeights<S>& w, Mat<S> x, const Vec<S>& h0, const Vec<S>& c0);

// A single cell step, used for incremental decoding.
template <typename S>
void lstm_step(const LstmWeights<S>& w, const Eigen::Ref<const Vec<S>>& x, const Vec<S>& h_prev,
               const Vec<S>& c_prev, Vec<S>& h, Vec<S>& c);

template <typename S>
struct EncoderOutput {
  Mat<S> states;  // 2H x n: forward state stacked over backward state
  Vec<S> init_h;  // reduced decoder start state
  Vec<S> init_c;
  Vec<S> final_h;  // concatenated last forward / last backward hidden states
  Vec<S> final_c;
  LstmCache<S> forward;
  LstmCache<S> backward;  // over the reversed sequence
};

// Throws Error(EmptySource) on an empty sequence.
template <typename S>
EncoderOutput<S> encode(const Params<S>& params, std::span<const TokenId> source_ids);

template <typename S>
struct AttentionResult {
  Vec<S> weights;  // over source positions
  Vec<S> context;  // weighted sum of encoder states
};

// Additive attention: score_i = v . tanh(W_enc e_i + W_dec s + b), softmax over
// positions whose mask entry is nonzero. Empty mask means all positions.
// Throws Error(AllMasked) if nothing is unmasked.
template <typename S>
AttentionResult<S> attention(const Params<S>& params, const Vec<S>& decoder_state,
                             const Mat<S>& encoder_states, std::span<const char> mask = {});

// Same, with W_enc * encoder_states precomputed.
template <typename S>
AttentionResult<S> attention_projected(const Params<S>& params, const Vec<S>& decoder_state,
                                       const Mat<S>& encoder_states, const Mat<S>& encoder_projection,
                                       std::span<const char> mask = {});

// sigmoid(w_c . c + w_h . h + w_x . x [+ b]); ignores the forced modes.
template <typename S>
S p_gen(const Params<S>& params, const Vec<S>& context, const Vec<S>& decoder_state,
        const Vec<S>& decoder_input, bool use_bias = true);

// Mixes the vocabulary and copy distributions into one over the extended
// vocabulary (|P_vocab| + n_oov entries). Throws Error(ShapeError) when
// sizes disagree or an extended id is out of range.
template <typename S>
Vec<S> final_distribution(const Vec<S>& p_vocab, const Vec<S>& p_attn, S p_gen,
                          std::span<const TokenId> source_extended_ids, std::size_t n_oov);

template <typename S>
Vec<S> softmax(const Eigen::Ref<const Vec<S>>& logits);

// ---- training ----

template <typename S>
struct ExampleCache {
  const EncodedExample* example = nullptr;
  EncoderOutput<S> encoder;
  std::vector<TokenId> decoder_inputs;
  LstmCache<S> decoder;
  Mat<S> encoder_projection;  // A x n
  Mat<S> decoder_projection;  // A x T, includes the attention bias
  Mat<S> attn;                // n x T
  Mat<S> context;             // 2H x T
  Mat<S> p_vocab;             // V x T
  Vec<S> p_gen;               // T
  Vec<S> copy_mass;           // attention mass on the gold token, per step
  Vec<S> gold_prob;           // P_final(gold), per step
  double loss = 0;            // mean over steps
};

template <typename S>
struct ForwardResult {
  double loss = 0;  // mean over examples of per-example mean NLL
  std::vector<ExampleCache<S>> caches;
};

// Teacher-forced loss. Examples must outlive the result.
template <typename S>
ForwardResult<S> forward_loss(const Params<S>& params, std::span<const EncodedExample> batch,
                              const ModelOptions& options = {});

// Exact gradient of forward_loss's loss for every tensor.
template <typename S>
Params<S> backward(const Params<S>& params, const ForwardResult<S>& forward, const ModelOptions& options = {});

// Loss only, without keeping caches alive across examples.
template <typename S>
double evaluate_loss(const Params<S>& params, std::span<const EncodedExample> examples,
                     const ModelOptions& options = {});

// ---- incremental decoding ----

template <typename S>
struct StepOutputs {
  Vec<S> p_vocab;
  Vec<S> p_attn;
  Vec<S> context;
  S p_gen = 0;
  Vec<S> h;  // decoder hidden state after the step
  Vec<S> c;  // decoder cell state after the step
  Vec<S> x;  // decoder input embedding
  Vec<S> p_final;
};

// Encodes one source once, then evaluates decoder steps on demand. Holds a
// reference to the parameters; it is cheap to create per request.
template <typename S>
class DecoderSession {
 public:
  DecoderSession(const Params<S>& params, const EncodedExample& source, const ModelOptions& options);

  const Vec<S>& initial_h() const { return encoder_.init_h; }
  const Vec<S>& initial_c() const { return encoder_.init_c; }
  std::size_t extended_size() const { return params_.vocab_size() + n_oov_; }

  // Input ids in the extended space are fed back as UNK.
  StepOutputs<S> step(const Vec<S>& h_prev, const Vec<S>& c_prev, TokenId input) const;

 private:
  const Params<S>& params_;
  ModelOptions options_;
  std::vector<TokenId> extended_ids_;
  std::size_t n_oov_;
  EncoderOutput<S> encoder_;
  Mat<S> projection_;
};

}  // namespace tabletitle::seqmodel
