#include "tabletitle/seqmodel/params.hpp"

#include <string>

#include "tabletitle/error.hpp"
#include "tabletitle/random.hpp"

namespace tabletitle::seqmodel {

void Hyperparams::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::Usage, "invalid hyperparameter: " + what); };
  if (embedding_dim == 0) fail("embedding_dim must be > 0");
  if (hidden_dim == 0) fail("hidden_dim must be > 0");
  if (batch_size == 0) fail("batch_size must be > 0");
  if (max_source_len == 0) fail("max_source_len must be > 0");
  if (!(gradient_clip > 0)) fail("gradient_clip must be > 0");
  if (!(learning_rate >= 0)) fail("learning_rate must be >= 0");
  if (!(accumulator_init > 0)) fail("accumulator_init must be > 0");
  if (!(init_magnitude >= 0)) fail("init_magnitude must be >= 0");
}

template <typename S>
Params<S> make_params(std::size_t vocab_size, std::size_t embedding_dim, std::size_t hidden_dim) {
  const auto V = static_cast<Eigen::Index>(vocab_size);
  const auto E = static_cast<Eigen::Index>(embedding_dim);
  const auto H = static_cast<Eigen::Index>(hidden_dim);
  const Eigen::Index A = H;
  auto lstm = [&](Eigen::Index input) {
    return LstmWeights<S>{Mat<S>::Zero(4 * H, input), Mat<S>::Zero(4 * H, H), Mat<S>::Zero(4 * H, 1)};
  };
  Params<S> p;
  p.embedding = Mat<S>::Zero(E, V);
  p.enc_fw = lstm(E);
  p.enc_bw = lstm(E);
  p.reduce_h_w = Mat<S>::Zero(H, 2 * H);
  p.reduce_h_b = Mat<S>::Zero(H, 1);
  p.reduce_c_w = Mat<S>::Zero(H, 2 * H);
  p.reduce_c_b = Mat<S>::Zero(H, 1);
  p.attn_enc = Mat<S>::Zero(A, 2 * H);
  p.attn_dec = Mat<S>::Zero(A, H);
  p.attn_b = Mat<S>::Zero(A, 1);
  p.attn_v = Mat<S>::Zero(A, 1);
  p.dec = lstm(E);
  p.out_w = Mat<S>::Zero(V, 3 * H);
  p.out_b = Mat<S>::Zero(V, 1);
  p.gen_c = Mat<S>::Zero(2 * H, 1);
  p.gen_h = Mat<S>::Zero(H, 1);
  p.gen_x = Mat<S>::Zero(E, 1);
  p.gen_b = Mat<S>::Zero(1, 1);
  return p;
}

template <typename S>
Params<S> init_params(const Hyperparams& hyper, std::size_t vocab_size, std::uint64_t seed) {
  hyper.validate();
  Params<S> p = make_params<S>(vocab_size, hyper.embedding_dim, hyper.hidden_dim);
  Rng rng(seed);
  for_each_tensor(p, [&](const TensorInfo& info, Mat<S>& t) {
    if (info.role == TensorRole::Bias) return;
    // Column-major fill order; fixed by the container layout.
    for (Eigen::Index i = 0; i < t.size(); ++i)
      t.data()[i] = static_cast<S>(rng.symmetric(hyper.init_magnitude));
  });
  return p;
}

template <typename S>
std::size_t parameter_count(const Params<S>& p) {
  std::size_t n = 0;
  for_each_tensor(p, [&](const TensorInfo&, const Mat<S>& t) { n += static_cast<std::size_t>(t.size()); });
  return n;
}

template <typename S>
bool all_finite(const Params<S>& p) {
  bool ok = true;
  for_each_tensor(p, [&](const TensorInfo&, const Mat<S>& t) { ok = ok && t.allFinite(); });
  return ok;
}

template Params<float> make_params<float>(std::size_t, std::size_t, std::size_t);
template Params<double> make_params<double>(std::size_t, std::size_t, std::size_t);
template Params<float> init_params<float>(const Hyperparams&, std::size_t, std::uint64_t);
template Params<double> init_params<double>(const Hyperparams&, std::size_t, std::uint64_t);
template std::size_t parameter_count<float>(const Params<float>&);
template std::size_t parameter_count<double>(const Params<double>&);
template bool all_finite<float>(const Params<float>&);
template bool all_finite<double>(const Params<double>&);

}  // namespace tabletitle::seqmodel
