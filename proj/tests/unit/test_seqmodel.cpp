#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gradcheck.hpp"
#include "synthetic.hpp"
#include "tabletitle/corpus/encode.hpp"
#include "tabletitle/error.hpp"
#include "tabletitle/random.hpp"
#include "tabletitle/seqmodel/checkpoint.hpp"
#include "tabletitle/seqmodel/optim.hpp"
#include "tabletitle/seqmodel/train.hpp"

using namespace tabletitle;
using namespace tabletitle::seqmodel;
using corpus::EncodedExample;
using corpus::TokenId;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Usage;
}

Vec<double> vec(std::initializer_list<double> v) {
  Vec<double> out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double max_abs(const Params<float>& p) {
  double m = 0;
  for_each_tensor(p, [&](const TensorInfo&, const Mat<float>& t) {
    if (t.size()) m = std::max(m, static_cast<double>(t.cwiseAbs().maxCoeff()));
  });
  return m;
}

// Plain-loop reimplementation of the teacher-forced loss, written without
// Eigen expressions so it shares no code with the model.
struct ScalarModel {
  const Params<double>& p;
  std::size_t H, E, V;

  explicit ScalarModel(const Params<double>& params)
      : p(params), H(params.hidden_dim()), E(params.embedding_dim()), V(params.vocab_size()) {}

  static double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  void cell(const LstmWeights<double>& w, const std::vector<double>& x, std::vector<double>& h,
            std::vector<double>& c) const {
    std::vector<double> g(4 * H);
    for (std::size_t r = 0; r < 4 * H; ++r) {
      double s = w.b(r, 0);
      for (std::size_t k = 0; k < x.size(); ++k) s += w.wx(r, k) * x[k];
      for (std::size_t k = 0; k < H; ++k) s += w.wh(r, k) * h[k];
      g[r] = s;
    }
    for (std::size_t k = 0; k < H; ++k) {
      c[k] = sig(g[H + k]) * c[k] + sig(g[k]) * std::tanh(g[2 * H + k]);
      h[k] = sig(g[3 * H + k]) * std::tanh(c[k]);
    }
  }

  std::vector<double> embed(TokenId id) const {
    std::vector<double> x(E);
    for (std::size_t k = 0; k < E; ++k) x[k] = p.embedding(k, id);
    return x;
  }

  double loss(const EncodedExample& ex, bool bias, GenMode mode) const {
    const std::size_t n = ex.source_ids.size();
    std::vector<std::vector<double>> enc(n, std::vector<double>(2 * H));
    std::vector<double> h(H, 0), c(H, 0), fh, fc;
    for (std::size_t i = 0; i < n; ++i) {
      cell(p.enc_fw, embed(ex.source_ids[i]), h, c);
      for (std::size_t k = 0; k < H; ++k) enc[i][k] = h[k];
    }
    fh = h;
    fc = c;
    h.assign(H, 0);
    c.assign(H, 0);
    for (std::size_t i = n; i-- > 0;) {
      cell(p.enc_bw, embed(ex.source_ids[i]), h, c);
      for (std::size_t k = 0; k < H; ++k) enc[i][H + k] = h[k];
    }
    fh.insert(fh.end(), h.begin(), h.end());
    fc.insert(fc.end(), c.begin(), c.end());
    std::vector<double> dh(H), dc(H);
    for (std::size_t r = 0; r < H; ++r) {
      dh[r] = p.reduce_h_b(r, 0);
      dc[r] = p.reduce_c_b(r, 0);
      for (std::size_t k = 0; k < 2 * H; ++k) {
        dh[r] += p.reduce_h_w(r, k) * fh[k];
        dc[r] += p.reduce_c_w(r, k) * fc[k];
      }
    }
    double total = 0;
    TokenId input = corpus::kStartId;
    for (TokenId gold : ex.target_ids) {
      const auto x = embed(input);
      cell(p.dec, x, dh, dc);
      std::vector<double> score(n);
      double mx = -1e300;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t a = 0; a < H; ++a) {
          double u = p.attn_b(a, 0);
          for (std::size_t k = 0; k < 2 * H; ++k) u += p.attn_enc(a, k) * enc[i][k];
          for (std::size_t k = 0; k < H; ++k) u += p.attn_dec(a, k) * dh[k];
          s += p.attn_v(a, 0) * std::tanh(u);
        }
        score[i] = s;
        mx = std::max(mx, s);
      }
      double z = 0;
      for (auto& s : score) z += (s = std::exp(s - mx));
      for (auto& s : score) s /= z;
      std::vector<double> ctx(2 * H, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < 2 * H; ++k) ctx[k] += score[i] * enc[i][k];
      std::vector<double> logits(V);
      double lmx = -1e300;
      for (std::size_t v = 0; v < V; ++v) {
        double s = p.out_b(v, 0);
        for (std::size_t k = 0; k < H; ++k) s += p.out_w(v, k) * dh[k];
        for (std::size_t k = 0; k < 2 * H; ++k) s += p.out_w(v, H + k) * ctx[k];
        logits[v] = s;
        lmx = std::max(lmx, s);
      }
      double lz = 0;
      for (double s : logits) lz += std::exp(s - lmx);
      double u = bias ? p.gen_b(0, 0) : 0.0;
      for (std::size_t k = 0; k < 2 * H; ++k) u += p.gen_c(k, 0) * ctx[k];
      for (std::size_t k = 0; k < H; ++k) u += p.gen_h(k, 0) * dh[k];
      for (std::size_t k = 0; k < E; ++k) u += p.gen_x(k, 0) * x[k];
      double pg = sig(u);
      if (mode == GenMode::CopyOnly) pg = 0;
      if (mode == GenMode::GenerateOnly) pg = 1;
      double prob = 0;
      if (static_cast<std::size_t>(gold) < V) prob += pg * std::exp(logits[gold] - lmx) / lz;
      for (std::size_t i = 0; i < n; ++i)
        if (ex.source_extended_ids[i] == gold) prob += (1 - pg) * score[i];
      total -= std::log(std::max(prob, 1e-12));
      input = static_cast<std::size_t>(gold) < V ? gold : corpus::kUnkId;
    }
    return total / static_cast<double>(ex.target_ids.size());
  }
};

}  // namespace

TEST(InitParams, DeterministicBoundedBiasesZero) {
  Hyperparams h;
  h.embedding_dim = 8;
  h.hidden_dim = 10;
  const auto a = init_params<float>(h, 30, 5);
  const auto b = init_params<float>(h, 30, 5);
  const auto c = init_params<float>(h, 30, 6);
  EXPECT_EQ(serialize_checkpoint({h, a}), serialize_checkpoint({h, b}));
  EXPECT_NE(serialize_checkpoint({h, a}), serialize_checkpoint({h, c}));
  EXPECT_LE(max_abs(a), 0.02 + 1e-9);
  EXPECT_GT(max_abs(a), 0.01);
  for_each_tensor(a, [](const TensorInfo& info, const Mat<float>& t) {
    if (info.role == TensorRole::Bias) {
      EXPECT_EQ(t.cwiseAbs().maxCoeff(), 0.0f) << info.name;
    } else {
      EXPECT_GT(t.cwiseAbs().maxCoeff(), 0.0f) << info.name;
    }
  });
  EXPECT_EQ(a.embedding.rows(), 8);
  EXPECT_EQ(a.embedding.cols(), 30);
  EXPECT_EQ(a.out_w.cols(), 30);
  EXPECT_TRUE(all_finite(a));
}

TEST(Hyperparams, DefaultsAndValidation) {
  const Hyperparams h;
  EXPECT_EQ(h.embedding_dim, 128u);
  EXPECT_EQ(h.hidden_dim, 256u);
  EXPECT_DOUBLE_EQ(h.learning_rate, 0.15);
  EXPECT_DOUBLE_EQ(h.gradient_clip, 2.0);
  EXPECT_EQ(h.batch_size, 64u);
  EXPECT_EQ(h.max_source_len, 150u);
  EXPECT_DOUBLE_EQ(h.init_magnitude, 0.02);
  Hyperparams bad;
  bad.gradient_clip = 0;
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::Usage);
  bad = {};
  bad.hidden_dim = 0;
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::Usage);
}

TEST(Encode, ShapesOrderSensitivityAndErrors) {
  const auto p = tabletitle::testing::random_model(12, 4, 6, 1);
  const std::vector<TokenId> one{5};
  const auto single = encode<double>(p, one);
  EXPECT_EQ(single.states.rows(), 12);
  EXPECT_EQ(single.states.cols(), 1);
  EXPECT_EQ(single.init_h.size(), 6);
  const std::vector<TokenId> fwd{4, 5, 6}, rev{6, 5, 4};
  const auto a = encode<double>(p, fwd);
  const auto b = encode<double>(p, rev);
  EXPECT_GT((a.init_h - b.init_h).norm(), 1e-6);
  EXPECT_EQ(encode<double>(p, fwd).states, a.states);
  EXPECT_EQ(code_of([&] { encode<double>(p, {}); }), ErrorCode::EmptySource);
  const std::vector<TokenId> bad{12};
  EXPECT_EQ(code_of([&] { encode<double>(p, bad); }), ErrorCode::ShapeError);
}

TEST(Attention, SinglePosition) {
  const auto p = tabletitle::testing::random_model(12, 4, 3, 2);
  Mat<double> states = Mat<double>::Random(6, 1);
  const auto r = attention<double>(p, Vec<double>::Random(3), states);
  ASSERT_EQ(r.weights.size(), 1);
  EXPECT_DOUBLE_EQ(r.weights[0], 1.0);
  EXPECT_TRUE(r.context.isApprox(states.col(0)));
}

TEST(Attention, IdenticalStatesSplitEvenly) {
  const auto p = tabletitle::testing::random_model(12, 4, 3, 3);
  Mat<double> states(6, 2);
  states.col(0) = Vec<double>::Random(6);
  states.col(1) = states.col(0);
  const auto r = attention<double>(p, Vec<double>::Random(3), states);
  EXPECT_NEAR(r.weights[0], 0.5, 1e-12);
  EXPECT_NEAR(r.weights[1], 0.5, 1e-12);
}

TEST(Attention, HandComputedDimTwo) {
  auto p = make_params<double>(12, 2, 1);
  p.attn_enc.resize(2, 2);
  p.attn_enc << 1, 0, 0, 1;
  p.attn_dec.resize(2, 1);
  p.attn_dec << 1, -1;
  p.attn_b.setZero(2, 1);
  p.attn_v.resize(2, 1);
  p.attn_v << 1, 1;
  Mat<double> states(2, 2);
  states << 1, 0, 0, 1;
  const auto r = attention<double>(p, vec({0.5}), states);
  // scores tanh(1.5) + tanh(-0.5) and 2 tanh(0.5)
  EXPECT_NEAR(r.weights[0], 0.3819680430714145, 1e-12);
  EXPECT_NEAR(r.weights[1], 0.6180319569285855, 1e-12);
  EXPECT_NEAR(r.context[0], 0.3819680430714145, 1e-12);
}

TEST(Attention, MaskZeroesPositionsAndAllMaskedThrows) {
  const auto p = tabletitle::testing::random_model(12, 4, 3, 4);
  const Mat<double> states = Mat<double>::Random(6, 3);
  const std::vector<char> mask{1, 0, 1};
  const auto r = attention<double>(p, Vec<double>::Random(3), states, mask);
  EXPECT_EQ(r.weights[1], 0.0);
  EXPECT_NEAR(r.weights.sum(), 1.0, 1e-12);
  const std::vector<char> none{0, 0, 0};
  EXPECT_EQ(code_of([&] { attention<double>(p, Vec<double>::Random(3), states, none); }), ErrorCode::AllMasked);
}

TEST(PGen, Examples) {
  auto p = make_params<double>(12, 2, 1);
  EXPECT_DOUBLE_EQ(p_gen<double>(p, vec({1, 2}), vec({3}), vec({4, 5})), 0.5);
  p.gen_b(0, 0) = 20;
  EXPECT_GE(p_gen<double>(p, vec({0, 0}), vec({0}), vec({0, 0})), 1 - 1e-8);
  EXPECT_LT(p_gen<double>(p, vec({0, 0}), vec({0}), vec({0, 0})), 1.0);
  p.gen_c.resize(2, 1);
  p.gen_c << 0.5, -1;
  p.gen_h(0, 0) = 3;
  p.gen_x.resize(2, 1);
  p.gen_x << 1, -2;
  p.gen_b(0, 0) = 0.1;
  // 0.5*2 - 1 + 3*0.25 + 0.5 - 1 + 0.1 = 0.35
  EXPECT_NEAR(p_gen<double>(p, vec({2, 1}), vec({0.25}), vec({0.5, 0.5})), 0.5866175789173301, 1e-12);
  EXPECT_NEAR(p_gen<double>(p, vec({2, 1}), vec({0.25}), vec({0.5, 0.5}), false), 1 / (1 + std::exp(-0.25)), 1e-12);
}

TEST(FinalDistribution, LimitsAndArithmetic) {
  const Vec<double> pv = vec({0.1, 0.2, 0.3, 0.4});
  const Vec<double> pa = vec({0.25, 0.15, 0.6});
  const std::vector<TokenId> ids{1, 4, 1};
  const auto gen = final_distribution<double>(pv, pa, 1.0, ids, 1);
  ASSERT_EQ(gen.size(), 5);
  EXPECT_TRUE(gen.head(4).isApprox(pv));
  EXPECT_EQ(gen[4], 0.0);
  const auto copy = final_distribution<double>(pv, pa, 0.0, ids, 1);
  EXPECT_NEAR(copy[1], 0.85, 1e-15);
  EXPECT_NEAR(copy[4], 0.15, 1e-15);
  EXPECT_EQ(copy[0], 0.0);
  const Vec<double> pv2 = vec({0.2, 0.8});
  const Vec<double> pa2 = vec({0.4, 0.6});
  const std::vector<TokenId> ids2{0, 2};
  const auto half = final_distribution<double>(pv2, pa2, 0.5, ids2, 1);
  EXPECT_NEAR(half[0], 0.3, 1e-15);
  EXPECT_EQ(code_of([&] { final_distribution<double>(pv, pa, 0.5, ids2, 1); }), ErrorCode::ShapeError);
  const std::vector<TokenId> out_of_range{1, 5, 1};
  EXPECT_EQ(code_of([&] { final_distribution<double>(pv, pa, 0.5, out_of_range, 1); }), ErrorCode::ShapeError);
}

TEST(FinalDistribution, RandomInstancesNormalizeAndMixLinearly) {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t V = 2 + rng.below(20), n = 1 + rng.below(15), oov = rng.below(5);
    Vec<double> pv(V), pa(n);
    for (auto& x : pv) x = rng.unit() + 1e-3;
    for (auto& x : pa) x = rng.unit() + 1e-3;
    pv /= pv.sum();
    pa /= pa.sum();
    std::vector<TokenId> ids(n);
    for (auto& id : ids) id = static_cast<TokenId>(rng.below(V + oov));
    const double g = rng.unit();
    const auto f = final_distribution<double>(pv, pa, g, ids, oov);
    const auto f0 = final_distribution<double>(pv, pa, 0.0, ids, oov);
    const auto f1 = final_distribution<double>(pv, pa, 1.0, ids, oov);
    EXPECT_NEAR(f.sum(), 1.0, 1e-6);
    EXPECT_LT((f - (g * f1 + (1 - g) * f0)).cwiseAbs().maxCoeff(), 1e-12);
    for (std::size_t w = V; w < V + oov; ++w) EXPECT_EQ(f1[static_cast<Eigen::Index>(w)], 0.0);
  }
}

TEST(ForwardLoss, UniformGivesLogV) {
  const auto p = make_params<double>(12, 4, 6);
  auto batch = tabletitle::testing::tiny_batch();
  batch[0].target_ids = {7, 11, corpus::kStopId};
  batch[1].target_ids = {6, corpus::kStopId};
  ModelOptions gen;
  gen.mode = GenMode::GenerateOnly;
  EXPECT_NEAR(forward_loss<double>(p, batch, gen).loss, std::log(12.0), 1e-12);
}

TEST(ForwardLoss, ConfidentModelNearZero) {
  const std::vector<TokenId> chain{7, 9, 11};
  const auto p = tabletitle::testing::chain_model(12, chain);
  EncodedExample ex;
  ex.source_ids = {4, 5};
  ex.source_extended_ids = {4, 5};
  ex.target_ids = {7, 9, 11, corpus::kStopId};
  const std::vector<EncodedExample> batch{ex};
  EXPECT_LT(forward_loss<double>(p, batch).loss, 1e-6);
}

TEST(ForwardLoss, MatchesScalarReimplementation) {
  const auto batch = tabletitle::testing::tiny_batch();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = tabletitle::testing::random_model(12, 4, 6, seed, 0.8);
    const ScalarModel oracle(p);
    for (GenMode mode : {GenMode::CopyGenerate, GenMode::CopyOnly, GenMode::GenerateOnly})
      for (bool bias : {true, false}) {
        ModelOptions o;
        o.mode = mode;
        o.gen_bias = bias;
        const double expected = 0.5 * (oracle.loss(batch[0], bias, mode) + oracle.loss(batch[1], bias, mode));
        EXPECT_NEAR(forward_loss<double>(p, batch, o).loss, expected, 1e-10);
        EXPECT_NEAR(evaluate_loss<double>(p, batch, o), expected, 1e-10);
      }
  }
}

TEST(ForwardLoss, FloatAgreesWithDouble) {
  const auto p = tabletitle::testing::random_model(12, 4, 6, 2);
  const auto batch = tabletitle::testing::tiny_batch();
  const auto pf = p.cast<float>();
  EXPECT_NEAR(forward_loss<float>(pf, batch).loss, forward_loss<double>(p, batch).loss, 1e-4);
}

TEST(Backward, MatchesFiniteDifferences) {
  const auto batch = tabletitle::testing::tiny_batch();
  for (GenMode mode : {GenMode::CopyGenerate, GenMode::CopyOnly, GenMode::GenerateOnly}) {
    for (bool bias : {true, false}) {
      ModelOptions o;
      o.mode = mode;
      o.gen_bias = bias;
      const auto r = tabletitle::testing::gradient_check(tabletitle::testing::random_model(12, 4, 6, 9), batch, o);
      EXPECT_LT(r.max_rel_error, 1e-4) << r.worst_tensor << "[" << r.worst_index << "] analytic " << r.analytic
                                       << " numeric " << r.numeric;
    }
  }
}

TEST(Backward, UnusedEmbeddingColumnHasZeroGradient) {
  const auto p = tabletitle::testing::random_model(12, 4, 6, 4);
  const auto batch = tabletitle::testing::tiny_batch();
  const auto g = backward<double>(p, forward_loss<double>(p, batch));
  EXPECT_EQ(g.embedding.col(10).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.embedding.col(8).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(g.embedding.col(corpus::kUnkId).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(g.out_w.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Backward, ForcedModesCutThePGenPath) {
  const auto p = tabletitle::testing::random_model(12, 4, 6, 4);
  const auto batch = tabletitle::testing::tiny_batch();
  for (GenMode mode : {GenMode::CopyOnly, GenMode::GenerateOnly}) {
    ModelOptions o;
    o.mode = mode;
    const auto g = backward<double>(p, forward_loss<double>(p, batch, o), o);
    EXPECT_EQ(g.gen_b.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(g.gen_c.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Adagrad, ZeroGradientLeavesParamsUnchanged) {
  auto p = tabletitle::testing::random_model(12, 4, 6, 1);
  const auto before = p;
  auto state = make_adagrad(p, 0.1);
  adagrad_update(p, p.zeros_like(), state, 0.15, 2.0);
  for_each_tensor_pair(p, before, [](const TensorInfo& info, const Mat<double>& a, const Mat<double>& b) {
    EXPECT_EQ(a, b) << info.name;
  });
}

TEST(Adagrad, ScalarHandArithmetic) {
  auto p = make_params<double>(12, 2, 1);
  auto state = make_adagrad(p, 0.1);
  auto g = p.zeros_like();
  g.gen_b(0, 0) = 3.0;
  EXPECT_DOUBLE_EQ(global_norm(g), 3.0);
  adagrad_update(p, g, state, 0.15, 2.0);
  EXPECT_NEAR(state.accumulator.gen_b(0, 0), 4.1, 1e-12);
  EXPECT_NEAR(p.gen_b(0, 0), -0.14815943949743846, 1e-12);
  EXPECT_NEAR(state.accumulator.gen_h(0, 0), 0.1, 1e-15);
  const double first = -p.gen_b(0, 0);
  adagrad_update(p, g, state, 0.15, 2.0);
  const double second = -p.gen_b(0, 0) - first;
  EXPECT_GT(second, 0);
  EXPECT_LT(second, first);
}

TEST(Adagrad, ClipReturnsPreClipNorm) {
  auto p = make_params<double>(12, 2, 1);
  auto g = p.zeros_like();
  g.gen_b(0, 0) = 3.0;
  g.gen_h(0, 0) = 4.0;
  EXPECT_DOUBLE_EQ(clip_global_norm(g, 2.0), 5.0);
  EXPECT_NEAR(global_norm(g), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(clip_global_norm(g, 10.0), 2.0);
  EXPECT_NEAR(global_norm(g), 2.0, 1e-12);
}

TEST(Adagrad, NonFiniteGradientRejectedBeforeUpdate) {
  auto p = tabletitle::testing::random_model(12, 4, 6, 1);
  const auto before = p;
  auto state = make_adagrad(p, 0.1);
  auto g = p.zeros_like();
  g.out_w(0, 0) = 1.0;
  g.dec.b(3, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(code_of([&] { adagrad_update(p, g, state, 0.15, 2.0); }), ErrorCode::NonFiniteGradient);
  EXPECT_EQ(p.out_w, before.out_w);
  g.dec.b(3, 0) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(code_of([&] { adagrad_update(p, g, state, 0.15, 2.0); }), ErrorCode::NonFiniteGradient);
}

TEST(Adagrad, ZeroLearningRateKeepsLoss) {
  auto p = tabletitle::testing::random_model(12, 4, 6, 3);
  const auto batch = tabletitle::testing::tiny_batch();
  const double before = evaluate_loss<double>(p, batch);
  auto state = make_adagrad(p, 0.1);
  adagrad_update(p, backward<double>(p, forward_loss<double>(p, batch)), state, 0.0, 2.0);
  EXPECT_EQ(evaluate_loss<double>(p, batch), before);
}

namespace {

struct SmallSetup {
  corpus::Vocabulary vocab;
  std::vector<EncodedExample> train, heldout;
  Hyperparams hyper;
};

SmallSetup small_setup() {
  SmallSetup s;
  const auto corpus = tabletitle::testing::make_synthetic_corpus(3, 1, 1, 1);
  s.vocab = corpus::build_vocab(corpus.lexicon);
  s.train = corpus::encode_records(corpus.train, s.vocab).examples;
  s.heldout = corpus::encode_records(corpus.heldout, s.vocab).examples;
  s.hyper.embedding_dim = 8;
  s.hyper.hidden_dim = 12;
  s.hyper.batch_size = 4;
  s.hyper.max_epochs = 3;
  s.hyper.init_magnitude = 0.1;
  return s;
}

}  // namespace

TEST(Train, DeterministicCheckpointBytes) {
  const auto s = small_setup();
  const auto a = train(s.train, s.heldout, s.vocab.size(), s.hyper);
  const auto b = train(s.train, s.heldout, s.vocab.size(), s.hyper);
  EXPECT_EQ(serialize_checkpoint({s.hyper, a.best}), serialize_checkpoint({s.hyper, b.best}));
  ASSERT_EQ(a.log.size(), b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].train_loss, b.log[i].train_loss);
    EXPECT_EQ(a.log[i].val_loss, b.log[i].val_loss);
  }
  EXPECT_EQ(a.epochs, 3u);
  EXPECT_EQ(a.stop, StopReason::MaxEpochs);
  EXPECT_EQ(a.steps, 3u * 2u);
}

TEST(Train, PatienceZeroStopsAtFirstNonImprovement) {
  auto s = small_setup();
  s.hyper.patience = 0;
  s.hyper.max_epochs = 200;
  s.hyper.learning_rate = 3.0;  // large enough to overshoot quickly
  s.hyper.eval_interval = 1;
  const auto r = train(s.train, s.heldout, s.vocab.size(), s.hyper);
  ASSERT_EQ(r.stop, StopReason::Patience);
  ASSERT_GE(r.log.size(), 2u);
  const auto& last = r.log.back();
  for (std::size_t i = 0; i + 1 < r.log.size(); ++i) {
    if (i > 0) EXPECT_LT(r.log[i].val_loss, r.log[i - 1].val_loss);
  }
  EXPECT_GE(last.val_loss, r.best_val_loss);
}

TEST(Train, BestCheckpointHasLowestValidationLoss) {
  auto s = small_setup();
  s.hyper.eval_interval = 1;
  const auto r = train(s.train, s.heldout, s.vocab.size(), s.hyper);
  double lowest = r.log.front().val_loss;
  for (const auto& row : r.log) lowest = std::min(lowest, row.val_loss);
  EXPECT_DOUBLE_EQ(r.best_val_loss, lowest);
  EXPECT_NEAR(evaluate_loss<float>(r.best, s.heldout), lowest, 1e-9);
}

TEST(Train, TargetLossAndEmptyCorpus) {
  auto s = small_setup();
  s.hyper.target_loss = 1e6;
  s.hyper.eval_interval = 1;
  const auto r = train(s.train, s.heldout, s.vocab.size(), s.hyper);
  EXPECT_EQ(r.stop, StopReason::TargetLoss);
  EXPECT_EQ(r.steps, 1u);
  EXPECT_EQ(code_of([&] { train({}, s.heldout, s.vocab.size(), s.hyper); }), ErrorCode::EmptyCorpus);
}

TEST(Train, WritesLog) {
  const auto s = small_setup();
  const auto r = train(s.train, {}, s.vocab.size(), s.hyper);
  const auto path = (std::filesystem::temp_directory_path() / "tabletitle_train_log.tsv").string();
  write_train_log(path, r.log);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "step\ttrain_loss\tval_loss\twall_ms");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, r.log.size());
  std::filesystem::remove(path);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  Hyperparams h;
  h.embedding_dim = 5;
  h.hidden_dim = 7;
  h.seed = 42;
  h.gen_bias = false;
  h.target_loss = 0.25;
  const Checkpoint ck{h, init_params<float>(h, 20, 3)};
  const std::string bytes = serialize_checkpoint(ck);
  const Checkpoint back = deserialize_checkpoint(bytes);
  EXPECT_EQ(back.hyper, h);
  EXPECT_EQ(serialize_checkpoint(back), bytes);
  for_each_tensor_pair(back.params, ck.params, [](const TensorInfo& info, const Mat<float>& a, const Mat<float>& b) {
    EXPECT_EQ(a, b) << info.name;
  });
  const auto path = (std::filesystem::temp_directory_path() / "tabletitle_ck.bin").string();
  save_checkpoint(ck, path);
  EXPECT_EQ(serialize_checkpoint(load_checkpoint(path)), bytes);
  std::filesystem::remove(path);
}

TEST(Checkpoint, MalformedInputsRejected) {
  Hyperparams h;
  h.embedding_dim = 3;
  h.hidden_dim = 4;
  const std::string bytes = serialize_checkpoint({h, init_params<float>(h, 13, 1)});
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(code_of([&] { deserialize_checkpoint(bad); }), ErrorCode::BadFormat);
  bad = bytes;
  bad[8] = 9;
  EXPECT_EQ(code_of([&] { deserialize_checkpoint(bad); }), ErrorCode::BadFormat);
  EXPECT_EQ(code_of([&] { deserialize_checkpoint(bytes.substr(0, bytes.size() - 1)); }), ErrorCode::BadFormat);
  EXPECT_EQ(code_of([&] { deserialize_checkpoint(bytes + "x"); }), ErrorCode::BadFormat);
  EXPECT_EQ(code_of([&] { load_checkpoint("/nonexistent/ck.bin"); }), ErrorCode::IoError);
}
