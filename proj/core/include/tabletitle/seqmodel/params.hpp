#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <type_traits>

#include <Eigen/Core>

#include "tabletitle/seqmodel/hyperparams.hpp"

namespace tabletitle::seqmodel {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Gate rows are stacked input, forget, candidate, output.
template <typename S>
struct LstmWeights {
  Mat<S> wx;  // 4H x input
  Mat<S> wh;  // 4H x H
  Mat<S> b;   // 4H x 1
};

// All learnable tensors. Vectors are stored as single-column matrices so
// every tensor can be visited uniformly.
template <typename S>
struct Params {
  Mat<S> embedding;  // E x |vocab|, one column per token
  LstmWeights<S> enc_fw;
  LstmWeights<S> enc_bw;
  Mat<S> reduce_h_w, reduce_h_b;  // H x 2H, H x 1
  Mat<S> reduce_c_w, reduce_c_b;
  Mat<S> attn_enc;  // A x 2H
  Mat<S> attn_dec;  // A x H
  Mat<S> attn_b;    // A x 1
  Mat<S> attn_v;    // A x 1
  LstmWeights<S> dec;
  Mat<S> out_w;  // |vocab| x 3H
  Mat<S> out_b;  // |vocab| x 1
  Mat<S> gen_c;  // 2H x 1
  Mat<S> gen_h;  // H x 1
  Mat<S> gen_x;  // E x 1
  Mat<S> gen_b;  // 1 x 1

  std::size_t vocab_size() const { return static_cast<std::size_t>(embedding.cols()); }
  std::size_t embedding_dim() const { return static_cast<std::size_t>(embedding.rows()); }
  std::size_t hidden_dim() const { return static_cast<std::size_t>(dec.wh.cols()); }

  // Same shapes, all zeros.
  Params zeros_like() const;
  template <typename T>
  Params<T> cast() const;
};

enum class TensorRole { Weight, Bias };

struct TensorInfo {
  std::string_view name;
  TensorRole role;
  bool vector;  // serialized as rank 1
};

// Calls f(info, tensor) for every tensor in a fixed order. Works on const
// and mutable Params alike.
template <typename P, typename F>
void for_each_tensor(P& p, F&& f) {
  using R = TensorRole;
  f(TensorInfo{"embedding", R::Weight, false}, p.embedding);
  f(TensorInfo{"enc_fw.wx", R::Weight, false}, p.enc_fw.wx);
  f(TensorInfo{"enc_fw.wh", R::Weight, false}, p.enc_fw.wh);
  f(TensorInfo{"enc_fw.b", R::Bias, true}, p.enc_fw.b);
  f(TensorInfo{"enc_bw.wx", R::Weight, false}, p.enc_bw.wx);
  f(TensorInfo{"enc_bw.wh", R::Weight, false}, p.enc_bw.wh);
  f(TensorInfo{"enc_bw.b", R::Bias, true}, p.enc_bw.b);
  f(TensorInfo{"reduce_h.w", R::Weight, false}, p.reduce_h_w);
  f(TensorInfo{"reduce_h.b", R::Bias, true}, p.reduce_h_b);
  f(TensorInfo{"reduce_c.w", R::Weight, false}, p.reduce_c_w);
  f(TensorInfo{"reduce_c.b", R::Bias, true}, p.reduce_c_b);
  f(TensorInfo{"attn.w_enc", R::Weight, false}, p.attn_enc);
  f(TensorInfo{"attn.w_dec", R::Weight, false}, p.attn_dec);
  f(TensorInfo{"attn.b", R::Bias, true}, p.attn_b);
  f(TensorInfo{"attn.v", R::Weight, true}, p.attn_v);
  f(TensorInfo{"dec.wx", R::Weight, false}, p.dec.wx);
  f(TensorInfo{"dec.wh", R::Weight, false}, p.dec.wh);
  f(TensorInfo{"dec.b", R::Bias, true}, p.dec.b);
  f(TensorInfo{"out.w", R::Weight, false}, p.out_w);
  f(TensorInfo{"out.b", R::Bias, true}, p.out_b);
  f(TensorInfo{"gen.w_c", R::Weight, true}, p.gen_c);
  f(TensorInfo{"gen.w_h", R::Weight, true}, p.gen_h);
  f(TensorInfo{"gen.w_x", R::Weight, true}, p.gen_x);
  f(TensorInfo{"gen.b", R::Bias, true}, p.gen_b);
}

// Pairwise visit of two parameter sets with identical shapes.
template <typename P, typename Q, typename F>
void for_each_tensor_pair(P& a, Q& b, F&& f);

// Zero-filled parameters with the shapes implied by the dimensions.
template <typename S>
Params<S> make_params(std::size_t vocab_size, std::size_t embedding_dim, std::size_t hidden_dim);

// Weights uniform in [-init_magnitude, init_magnitude], biases zero.
template <typename S>
Params<S> init_params(const Hyperparams& hyper, std::size_t vocab_size, std::uint64_t seed);

template <typename S>
std::size_t parameter_count(const Params<S>& p);

template <typename S>
bool all_finite(const Params<S>& p);

using ModelParams = Params<float>;

// ---- implementation details below ----

template <typename P, typename Q, typename F>
void for_each_tensor_pair(P& a, Q& b, F&& f) {
  // Collect pointers from b in visit order, then walk a.
  using BT = std::remove_reference_t<decltype((b.embedding))>;
  BT* ptrs[32];
  std::size_t n = 0;
  for_each_tensor(b, [&](const TensorInfo&, BT& t) { ptrs[n++] = &t; });
  std::size_t k = 0;
  for_each_tensor(a, [&](const TensorInfo& info, auto& t) { f(info, t, *ptrs[k++]); });
}

template <typename S>
Params<S> Params<S>::zeros_like() const {
  Params<S> z;
  for_each_tensor_pair(z, *this, [](const TensorInfo&, Mat<S>& dst, const Mat<S>& src) {
    dst = Mat<S>::Zero(src.rows(), src.cols());
  });
  return z;
}

template <typename S>
template <typename T>
Params<T> Params<S>::cast() const {
  Params<T> out;
  for_each_tensor_pair(out, *this, [](const TensorInfo&, Mat<T>& dst, const Mat<S>& src) {
    dst = src.template cast<T>();
  });
  return out;
}

}  // namespace tabletitle::seqmodel
