#include "tabletitle/seqmodel/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tabletitle/error.hpp"

namespace tabletitle::seqmodel {

namespace {

using Eigen::Index;

template <typename S>
S sigmoid(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

template <typename S>
Mat<S> gather_columns(const Mat<S>& table, std::span<const TokenId> ids) {
  Mat<S> out(table.rows(), static_cast<Index>(ids.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) out.col(static_cast<Index>(i)) = table.col(ids[i]);
  return out;
}

template <typename S>
Mat<S> reverse_columns(const Mat<S>& m) {
  return m.rowwise().reverse();
}

TokenId feed_id(TokenId id, std::size_t vocab_size) {
  return id >= static_cast<TokenId>(vocab_size) ? corpus::kUnkId : id;
}

// Softmax in place over the unmasked entries of a score vector.
template <typename S>
void masked_softmax(Vec<S>& scores, std::span<const char> mask) {
  const Index n = scores.size();
  auto live = [&](Index i) { return mask.empty() || mask[static_cast<std::size_t>(i)] != 0; };
  S max_score = -std::numeric_limits<S>::infinity();
  for (Index i = 0; i < n; ++i)
    if (live(i)) max_score = std::max(max_score, scores[i]);
  if (!std::isfinite(max_score) && max_score < 0)
    throw Error(ErrorCode::AllMasked, "attention mask excludes every source position");
  double total = 0;
  for (Index i = 0; i < n; ++i) {
    if (live(i)) {
      scores[i] = std::exp(scores[i] - max_score);
      total += static_cast<double>(scores[i]);
    } else {
      scores[i] = 0;
    }
  }
  scores /= static_cast<S>(total);
}

template <typename S>
void lstm_backward(const LstmWeights<S>& w, const LstmCache<S>& cache, const Mat<S>& dh_out,
                   Vec<S> dc_next, LstmWeights<S>& grad, Mat<S>& dx, Vec<S>& dh0, Vec<S>& dc0) {
  const Index n = cache.h.cols();
  const Index H = cache.h.rows();
  Mat<S> dgates(4 * H, n);
  Vec<S> dh_next = Vec<S>::Zero(H);
  for (Index t = n - 1; t >= 0; --t) {
    const auto g = cache.gates.col(t);
    const auto i = g.segment(0, H);
    const auto f = g.segment(H, H);
    const auto cand = g.segment(2 * H, H);
    const auto o = g.segment(3 * H, H);
    const auto tc = cache.tanh_c.col(t);
    const Vec<S> dh = dh_out.col(t) + dh_next;
    const Vec<S> dc = dc_next.array() + dh.array() * o.array() * (S(1) - tc.array().square());
    const Vec<S> c_prev = t > 0 ? Vec<S>(cache.c.col(t - 1)) : cache.c0;
    auto dg = dgates.col(t);
    dg.segment(0, H) = (dc.array() * cand.array() * i.array() * (S(1) - i.array())).matrix();
    dg.segment(H, H) = (dc.array() * c_prev.array() * f.array() * (S(1) - f.array())).matrix();
    dg.segment(2 * H, H) = (dc.array() * i.array() * (S(1) - cand.array().square())).matrix();
    dg.segment(3 * H, H) = (dh.array() * tc.array() * o.array() * (S(1) - o.array())).matrix();
    dc_next = (dc.array() * f.array()).matrix();
    dh_next.noalias() = w.wh.transpose() * dg;
  }
  Mat<S> h_prev(H, n);
  h_prev.col(0) = cache.h0;
  if (n > 1) h_prev.rightCols(n - 1) = cache.h.leftCols(n - 1);
  grad.wx.noalias() += dgates * cache.x.transpose();
  grad.wh.noalias() += dgates * h_prev.transpose();
  grad.b += dgates.rowwise().sum();
  dx.noalias() = w.wx.transpose() * dgates;
  dh0 = dh_next;
  dc0 = dc_next;
}

template <typename S>
void check_ids(std::span<const TokenId> ids, std::size_t limit, const char* what) {
  for (TokenId id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= limit)
      throw Error(ErrorCode::ShapeError, std::string(what) + " id " + std::to_string(id) +
                                             " outside [0, " + std::to_string(limit) + ")");
  }
}

}  // namespace

template <typename S>
Vec<S> softmax(const Eigen::Ref<const Vec<S>>& logits) {
  Vec<S> out = logits;
  masked_softmax<S>(out, {});
  return out;
}

template <typename S>
LstmCache<S> lstm_forward(const LstmWeights<S>& w, Mat<S> x, const Vec<S>& h0, const Vec<S>& c0) {
  const Index n = x.cols();
  const Index H = w.wh.cols();
  LstmCache<S> cache;
  cache.h0 = h0;
  cache.c0 = c0;
  Mat<S> pre = w.wx * x;
  pre.colwise() += w.b.col(0);
  cache.x = std::move(x);
  cache.gates.resize(4 * H, n);
  cache.c.resize(H, n);
  cache.h.resize(H, n);
  cache.tanh_c.resize(H, n);
  Vec<S> h = h0;
  Vec<S> c = c0;
  Vec<S> g(4 * H);
  for (Index t = 0; t < n; ++t) {
    g.noalias() = pre.col(t) + w.wh * h;
    auto act = cache.gates.col(t);
    for (Index k = 0; k < H; ++k) {
      act[k] = sigmoid(g[k]);
      act[H + k] = sigmoid(g[H + k]);
      act[2 * H + k] = std::tanh(g[2 * H + k]);
      act[3 * H + k] = sigmoid(g[3 * H + k]);
    }
    c = (act.segment(H, H).array() * c.array() + act.segment(0, H).array() * act.segment(2 * H, H).array())
            .matrix();
    cache.tanh_c.col(t) = c.array().tanh().matrix();
    h = (act.segment(3 * H, H).array() * cache.tanh_c.col(t).array()).matrix();
    cache.c.col(t) = c;
    cache.h.col(t) = h;
  }
  return cache;
}

template <typename S>
void lstm_step(const LstmWeights<S>& w, const Eigen::Ref<const Vec<S>>& x, const Vec<S>& h_prev,
               const Vec<S>& c_prev, Vec<S>& h, Vec<S>& c) {
  const Index H = w.wh.cols();
  Vec<S> g = w.wx * x + w.wh * h_prev + w.b.col(0);
  c.resize(H);
  h.resize(H);
  for (Index k = 0; k < H; ++k) {
    const S i = sigmoid(g[k]);
    const S f = sigmoid(g[H + k]);
    const S cand = std::tanh(g[2 * H + k]);
    const S o = sigmoid(g[3 * H + k]);
    c[k] = f * c_prev[k] + i * cand;
    h[k] = o * std::tanh(c[k]);
  }
}

template <typename S>
EncoderOutput<S> encode(const Params<S>& params, std::span<const TokenId> source_ids) {
  if (source_ids.empty()) throw Error(ErrorCode::EmptySource, "cannot encode an empty source sequence");
  check_ids<S>(source_ids, params.vocab_size(), "source");
  const Index H = static_cast<Index>(params.hidden_dim());
  const Index n = static_cast<Index>(source_ids.size());
  const Vec<S> zero = Vec<S>::Zero(H);

  EncoderOutput<S> out;
  Mat<S> x = gather_columns(params.embedding, source_ids);
  out.backward = lstm_forward(params.enc_bw, reverse_columns(x), zero, zero);
  out.forward = lstm_forward(params.enc_fw, std::move(x), zero, zero);

  out.states.resize(2 * H, n);
  out.states.topRows(H) = out.forward.h;
  out.states.bottomRows(H) = reverse_columns(out.backward.h);

  out.final_h.resize(2 * H);
  out.final_h << out.forward.h.col(n - 1), out.backward.h.col(n - 1);
  out.final_c.resize(2 * H);
  out.final_c << out.forward.c.col(n - 1), out.backward.c.col(n - 1);
  out.init_h = params.reduce_h_w * out.final_h + params.reduce_h_b.col(0);
  out.init_c = params.reduce_c_w * out.final_c + params.reduce_c_b.col(0);
  return out;
}

template <typename S>
AttentionResult<S> attention_projected(const Params<S>& params, const Vec<S>& decoder_state,
                                       const Mat<S>& encoder_states, const Mat<S>& encoder_projection,
                                       std::span<const char> mask) {
  if (!mask.empty() && static_cast<Index>(mask.size()) != encoder_states.cols())
    throw Error(ErrorCode::ShapeError, "attention mask length does not match source length");
  const Vec<S> query = params.attn_dec * decoder_state + params.attn_b.col(0);
  const Mat<S> hidden = (encoder_projection.colwise() + query).array().tanh().matrix();
  AttentionResult<S> r;
  r.weights = hidden.transpose() * params.attn_v.col(0);
  masked_softmax<S>(r.weights, mask);
  r.context = encoder_states * r.weights;
  return r;
}

template <typename S>
AttentionResult<S> attention(const Params<S>& params, const Vec<S>& decoder_state,
                             const Mat<S>& encoder_states, std::span<const char> mask) {
  const Mat<S> projection = params.attn_enc * encoder_states;
  return attention_projected(params, decoder_state, encoder_states, projection, mask);
}

template <typename S>
S p_gen(const Params<S>& params, const Vec<S>& context, const Vec<S>& decoder_state,
        const Vec<S>& decoder_input, bool use_bias) {
  S u = params.gen_c.col(0).dot(context) + params.gen_h.col(0).dot(decoder_state) +
        params.gen_x.col(0).dot(decoder_input);
  if (use_bias) u += params.gen_b(0, 0);
  return sigmoid(u);
}

template <typename S>
Vec<S> final_distribution(const Vec<S>& p_vocab, const Vec<S>& p_attn, S pg,
                          std::span<const TokenId> source_extended_ids, std::size_t n_oov) {
  if (static_cast<std::size_t>(p_attn.size()) != source_extended_ids.size())
    throw Error(ErrorCode::ShapeError, "attention length " + std::to_string(p_attn.size()) +
                                           " != source length " + std::to_string(source_extended_ids.size()));
  const std::size_t vocab = static_cast<std::size_t>(p_vocab.size());
  check_ids<S>(source_extended_ids, vocab + n_oov, "extended");
  Vec<S> out = Vec<S>::Zero(static_cast<Index>(vocab + n_oov));
  out.head(p_vocab.size()) = pg * p_vocab;
  const S copy_weight = S(1) - pg;
  for (std::size_t i = 0; i < source_extended_ids.size(); ++i)
    out[source_extended_ids[i]] += copy_weight * p_attn[static_cast<Index>(i)];
  return out;
}

template <typename S>
static S effective_p_gen(S raw, GenMode mode) {
  switch (mode) {
    case GenMode::CopyOnly: return S(0);
    case GenMode::GenerateOnly: return S(1);
    case GenMode::CopyGenerate: break;
  }
  return raw;
}

template <typename S>
static ExampleCache<S> forward_example(const Params<S>& params, const EncodedExample& ex,
                                       const ModelOptions& options) {
  const std::size_t V = params.vocab_size();
  const std::size_t ext_size = ex.extended_size(V);
  if (ex.source_extended_ids.size() != ex.source_ids.size())
    throw Error(ErrorCode::ShapeError, "source and extended source lengths differ");
  if (ex.target_ids.empty()) throw Error(ErrorCode::ShapeError, "example has no target");
  check_ids<S>(ex.target_ids, ext_size, "target");
  check_ids<S>(ex.source_extended_ids, ext_size, "extended");

  ExampleCache<S> cache;
  cache.example = &ex;
  cache.encoder = encode(params, ex.source_ids);
  const Mat<S>& enc = cache.encoder.states;
  const Index n = enc.cols();
  const Index T = static_cast<Index>(ex.target_ids.size());
  const Index H = static_cast<Index>(params.hidden_dim());

  cache.decoder_inputs.reserve(ex.target_ids.size());
  cache.decoder_inputs.push_back(corpus::kStartId);
  for (Index t = 0; t + 1 < T; ++t) cache.decoder_inputs.push_back(feed_id(ex.target_ids[t], V));
  cache.decoder = lstm_forward(params.dec, gather_columns(params.embedding, cache.decoder_inputs),
                               cache.encoder.init_h, cache.encoder.init_c);
  const Mat<S>& hd = cache.decoder.h;

  cache.encoder_projection = params.attn_enc * enc;
  cache.decoder_projection = params.attn_dec * hd;
  cache.decoder_projection.colwise() += params.attn_b.col(0);
  cache.attn.resize(n, T);
  for (Index t = 0; t < T; ++t) {
    const Mat<S> hidden =
        (cache.encoder_projection.colwise() + cache.decoder_projection.col(t)).array().tanh().matrix();
    Vec<S> scores = hidden.transpose() * params.attn_v.col(0);
    masked_softmax<S>(scores, {});
    cache.attn.col(t) = scores;
  }
  cache.context = enc * cache.attn;

  Mat<S> features(3 * H, T);
  features.topRows(H) = hd;
  features.bottomRows(2 * H) = cache.context;
  cache.p_vocab = params.out_w * features;
  cache.p_vocab.colwise() += params.out_b.col(0);
  for (Index t = 0; t < T; ++t) {
    Vec<S> col = cache.p_vocab.col(t);
    masked_softmax<S>(col, {});
    cache.p_vocab.col(t) = col;
  }

  cache.p_gen.resize(T);
  cache.copy_mass.resize(T);
  cache.gold_prob.resize(T);
  double total = 0;
  for (Index t = 0; t < T; ++t) {
    S u = params.gen_c.col(0).dot(cache.context.col(t)) + params.gen_h.col(0).dot(hd.col(t)) +
          params.gen_x.col(0).dot(cache.decoder.x.col(t));
    if (options.gen_bias) u += params.gen_b(0, 0);
    const S pg = effective_p_gen(sigmoid(u), options.mode);
    cache.p_gen[t] = pg;
    const TokenId gold = ex.target_ids[t];
    S copy = 0;
    for (Index i = 0; i < n; ++i)
      if (ex.source_extended_ids[i] == gold) copy += cache.attn(i, t);
    cache.copy_mass[t] = copy;
    const S vocab_part = static_cast<std::size_t>(gold) < V ? cache.p_vocab(gold, t) : S(0);
    const S prob = pg * vocab_part + (S(1) - pg) * copy;
    cache.gold_prob[t] = prob;
    total -= std::log(std::max(static_cast<double>(prob), options.prob_floor));
  }
  cache.loss = total / static_cast<double>(T);
  return cache;
}

template <typename S>
ForwardResult<S> forward_loss(const Params<S>& params, std::span<const EncodedExample> batch,
                              const ModelOptions& options) {
  if (batch.empty()) throw Error(ErrorCode::ShapeError, "empty batch");
  ForwardResult<S> result;
  result.caches.reserve(batch.size());
  double total = 0;
  for (const auto& ex : batch) {
    result.caches.push_back(forward_example(params, ex, options));
    total += result.caches.back().loss;
  }
  result.loss = total / static_cast<double>(batch.size());
  return result;
}

template <typename S>
double evaluate_loss(const Params<S>& params, std::span<const EncodedExample> examples,
                     const ModelOptions& options) {
  if (examples.empty()) return 0;
  double total = 0;
  for (const auto& ex : examples) total += forward_example(params, ex, options).loss;
  return total / static_cast<double>(examples.size());
}

template <typename S>
static void backward_example(const Params<S>& params, const ExampleCache<S>& cache, S scale,
                             const ModelOptions& options, Params<S>& grad) {
  const EncodedExample& ex = *cache.example;
  const std::size_t V = params.vocab_size();
  const Mat<S>& enc = cache.encoder.states;
  const Mat<S>& hd = cache.decoder.h;
  const Index n = enc.cols();
  const Index T = hd.cols();
  const Index H = static_cast<Index>(params.hidden_dim());
  const bool learn_gen = options.mode == GenMode::CopyGenerate;

  // Output layer and p_gen.
  Mat<S> dlogits = Mat<S>::Zero(static_cast<Index>(V), T);
  Mat<S> dattn = Mat<S>::Zero(n, T);
  Vec<S> du = Vec<S>::Zero(T);
  for (Index t = 0; t < T; ++t) {
    const S prob = cache.gold_prob[t];
    if (!(static_cast<double>(prob) > options.prob_floor)) continue;
    const S dprob = -scale / prob;
    const TokenId gold = ex.target_ids[t];
    const S pg = cache.p_gen[t];
    const bool in_vocab = static_cast<std::size_t>(gold) < V;
    const S pv_gold = in_vocab ? cache.p_vocab(gold, t) : S(0);
    if (in_vocab) {
      const S dpv = dprob * pg;
      dlogits.col(t) = -dpv * pv_gold * cache.p_vocab.col(t);
      dlogits(gold, t) += dpv * pv_gold;
    }
    if (learn_gen) {
      const S dpg = dprob * (pv_gold - cache.copy_mass[t]);
      du[t] = dpg * pg * (S(1) - pg);
    }
    const S dcopy = dprob * (S(1) - pg);
    for (Index i = 0; i < n; ++i)
      if (ex.source_extended_ids[i] == gold) dattn(i, t) += dcopy;
  }

  Mat<S> features(3 * H, T);
  features.topRows(H) = hd;
  features.bottomRows(2 * H) = cache.context;
  grad.out_w.noalias() += dlogits * features.transpose();
  grad.out_b += dlogits.rowwise().sum();
  const Mat<S> dfeatures = params.out_w.transpose() * dlogits;
  Mat<S> dhd = dfeatures.topRows(H);
  Mat<S> dctx = dfeatures.bottomRows(2 * H);
  Mat<S> dxd = Mat<S>::Zero(static_cast<Index>(params.embedding_dim()), T);

  grad.gen_c.col(0).noalias() += cache.context * du;
  grad.gen_h.col(0).noalias() += hd * du;
  grad.gen_x.col(0).noalias() += cache.decoder.x * du;
  if (options.gen_bias && learn_gen) grad.gen_b(0, 0) += du.sum();
  dctx.noalias() += params.gen_c.col(0) * du.transpose();
  dhd.noalias() += params.gen_h.col(0) * du.transpose();
  dxd.noalias() += params.gen_x.col(0) * du.transpose();

  // Attention.
  Mat<S> denc = dctx * cache.attn.transpose();
  dattn.noalias() += enc.transpose() * dctx;
  const Index A = params.attn_v.rows();
  Mat<S> denc_proj = Mat<S>::Zero(A, n);
  Mat<S> ddec_proj(A, T);
  for (Index t = 0; t < T; ++t) {
    const Mat<S> hidden =
        (cache.encoder_projection.colwise() + cache.decoder_projection.col(t)).array().tanh().matrix();
    const auto a = cache.attn.col(t);
    const S mean = a.dot(dattn.col(t));
    const Vec<S> dscore = (a.array() * (dattn.col(t).array() - mean)).matrix();
    grad.attn_v.col(0).noalias() += hidden * dscore;
    const Mat<S> dpre =
        ((params.attn_v.col(0) * dscore.transpose()).array() * (S(1) - hidden.array().square())).matrix();
    denc_proj += dpre;
    ddec_proj.col(t) = dpre.rowwise().sum();
  }
  grad.attn_enc.noalias() += denc_proj * enc.transpose();
  denc.noalias() += params.attn_enc.transpose() * denc_proj;
  grad.attn_dec.noalias() += ddec_proj * hd.transpose();
  dhd.noalias() += params.attn_dec.transpose() * ddec_proj;
  grad.attn_b += ddec_proj.rowwise().sum();

  // Decoder LSTM.
  Mat<S> dx_lstm;
  Vec<S> dh0, dc0;
  lstm_backward(params.dec, cache.decoder, dhd, Vec<S>(Vec<S>::Zero(H)), grad.dec, dx_lstm, dh0, dc0);
  dxd += dx_lstm;
  for (Index t = 0; t < T; ++t) grad.embedding.col(cache.decoder_inputs[t]) += dxd.col(t);

  // State reduction.
  grad.reduce_h_w.noalias() += dh0 * cache.encoder.final_h.transpose();
  grad.reduce_h_b += dh0;
  grad.reduce_c_w.noalias() += dc0 * cache.encoder.final_c.transpose();
  grad.reduce_c_b += dc0;
  const Vec<S> dfinal_h = params.reduce_h_w.transpose() * dh0;
  const Vec<S> dfinal_c = params.reduce_c_w.transpose() * dc0;

  // Encoder LSTMs.
  Mat<S> dfw = denc.topRows(H);
  dfw.col(n - 1) += dfinal_h.head(H);
  Mat<S> dbw = reverse_columns<S>(denc.bottomRows(H));
  dbw.col(n - 1) += dfinal_h.tail(H);
  Mat<S> dx_fw, dx_bw;
  Vec<S> unused_h, unused_c;
  lstm_backward(params.enc_fw, cache.encoder.forward, dfw, Vec<S>(dfinal_c.head(H)), grad.enc_fw, dx_fw,
                unused_h, unused_c);
  lstm_backward(params.enc_bw, cache.encoder.backward, dbw, Vec<S>(dfinal_c.tail(H)), grad.enc_bw, dx_bw,
                unused_h, unused_c);
  dx_fw += reverse_columns(dx_bw);
  for (Index i = 0; i < n; ++i) grad.embedding.col(ex.source_ids[i]) += dx_fw.col(i);
}

template <typename S>
Params<S> backward(const Params<S>& params, const ForwardResult<S>& forward, const ModelOptions& options) {
  Params<S> grad = params.zeros_like();
  const double batch = static_cast<double>(forward.caches.size());
  for (const auto& cache : forward.caches) {
    const double steps = static_cast<double>(cache.example->target_ids.size());
    backward_example(params, cache, static_cast<S>(1.0 / (batch * steps)), options, grad);
  }
  return grad;
}

template <typename S>
DecoderSession<S>::DecoderSession(const Params<S>& params, const EncodedExample& source,
                                  const ModelOptions& options)
    : params_(params),
      options_(options),
      extended_ids_(source.source_extended_ids),
      n_oov_(source.oov_tokens.size()),
      encoder_(encode(params, source.source_ids)),
      projection_(params.attn_enc * encoder_.states) {
  check_ids<S>(extended_ids_, extended_size(), "extended");
}

template <typename S>
StepOutputs<S> DecoderSession<S>::step(const Vec<S>& h_prev, const Vec<S>& c_prev, TokenId input) const {
  StepOutputs<S> out;
  const TokenId fed = feed_id(input, params_.vocab_size());
  out.x = params_.embedding.col(fed);
  lstm_step<S>(params_.dec, out.x, h_prev, c_prev, out.h, out.c);
  AttentionResult<S> att = attention_projected(params_, out.h, encoder_.states, projection_);
  out.p_attn = std::move(att.weights);
  out.context = std::move(att.context);
  const Index H = out.h.size();
  Vec<S> logits = params_.out_w.leftCols(H) * out.h + params_.out_w.rightCols(2 * H) * out.context +
                  params_.out_b.col(0);
  out.p_vocab = softmax<S>(logits);
  out.p_gen = effective_p_gen(p_gen(params_, out.context, out.h, out.x, options_.gen_bias), options_.mode);
  out.p_final = final_distribution<S>(out.p_vocab, out.p_attn, out.p_gen, extended_ids_, n_oov_);
  return out;
}

#define TABLETITLE_INSTANTIATE(S)                                                                      \
  template Vec<S> softmax<S>(const Eigen::Ref<const Vec<S>>&);                                         \
  template LstmCache<S> lstm_forward<S>(const LstmWeights<S>&, Mat<S>, const Vec<S>&, const Vec<S>&);  \
  template void lstm_step<S>(const LstmWeights<S>&, const Eigen::Ref<const Vec<S>>&, const Vec<S>&,    \
                             const Vec<S>&, Vec<S>&, Vec<S>&);                                         \
  template EncoderOutput<S> encode<S>(const Params<S>&, std::span<const TokenId>);                     \
  template AttentionResult<S> attention<S>(const Params<S>&, const Vec<S>&, const Mat<S>&,             \
                                           std::span<const char>);                                     \
  template AttentionResult<S> attention_projected<S>(const Params<S>&, const Vec<S>&, const Mat<S>&,   \
                                                     const Mat<S>&, std::span<const char>);            \
  template S p_gen<S>(const Params<S>&, const Vec<S>&, const Vec<S>&, const Vec<S>&, bool);            \
  template Vec<S> final_distribution<S>(const Vec<S>&, const Vec<S>&, S, std::span<const TokenId>,     \
                                        std::size_t);                                                  \
  template ForwardResult<S> forward_loss<S>(const Params<S>&, std::span<const EncodedExample>,         \
                                            const ModelOptions&);                                      \
  template Params<S> backward<S>(const Params<S>&, const ForwardResult<S>&, const ModelOptions&);      \
  template double evaluate_loss<S>(const Params<S>&, std::span<const EncodedExample>,                  \
                                   const ModelOptions&);                                               \
  template class DecoderSession<S>;

TABLETITLE_INSTANTIATE(float)
TABLETITLE_INSTANTIATE(double)

#undef TABLETITLE_INSTANTIATE

}  // namespace tabletitle::seqmodel
