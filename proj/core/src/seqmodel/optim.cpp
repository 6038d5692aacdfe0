#include "tabletitle/seqmodel/optim.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tabletitle/error.hpp"

namespace tabletitle::seqmodel {

template <typename S>
AdagradState<S> make_adagrad(const Params<S>& params, double accumulator_init) {
  AdagradState<S> state{params.zeros_like()};
  for_each_tensor(state.accumulator, [&](const TensorInfo&, Mat<S>& t) { t.setConstant(static_cast<S>(accumulator_init)); });
  return state;
}

template <typename S>
double global_norm(const Params<S>& grads) {
  double sq = 0;
  for_each_tensor(grads, [&](const TensorInfo&, const Mat<S>& t) {
    sq += t.template cast<double>().squaredNorm();
  });
  return std::sqrt(sq);
}

template <typename S>
double clip_global_norm(Params<S>& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (norm > max_norm) {
    const S scale = static_cast<S>(max_norm / norm);
    for_each_tensor(grads, [&](const TensorInfo&, Mat<S>& t) { t *= scale; });
  }
  return norm;
}

template <typename S>
void adagrad_update(Params<S>& params, Params<S> grads, AdagradState<S>& state, double learning_rate,
                    double clip) {
  for_each_tensor(grads, [&](const TensorInfo& info, const Mat<S>& t) {
    if (!t.allFinite())
      throw Error(ErrorCode::NonFiniteGradient, "non-finite gradient in tensor " + std::string(info.name));
  });
  clip_global_norm(grads, clip);
  const S lr = static_cast<S>(learning_rate);
  std::vector<Mat<S>*> acc;
  for_each_tensor(state.accumulator, [&](const TensorInfo&, Mat<S>& t) { acc.push_back(&t); });
  std::size_t k = 0;
  for_each_tensor_pair(params, grads, [&](const TensorInfo&, Mat<S>& p, const Mat<S>& g) {
    Mat<S>& a = *acc[k++];
    a.array() += g.array().square();
    p.array() -= lr * g.array() / a.array().sqrt();
  });
}

}  // namespace tabletitle::seqmodel

#define TABLETITLE_INSTANTIATE(S)                                                            \
  template AdagradState<S> make_adagrad<S>(const Params<S>&, double);                        \
  template double global_norm<S>(const Params<S>&);                                          \
  template double clip_global_norm<S>(Params<S>&, double);                                   \
  template void adagrad_update<S>(Params<S>&, Params<S>, AdagradState<S>&, double, double);

namespace tabletitle::seqmodel {
TABLETITLE_INSTANTIATE(float)
TABLETITLE_INSTANTIATE(double)
}  // namespace tabletitle::seqmodel
