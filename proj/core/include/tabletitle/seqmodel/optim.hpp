#pragma once

#include "tabletitle/seqmodel/params.hpp"

namespace tabletitle::seqmodel {

template <typename S>
struct AdagradState {
  Params<S> accumulator;
};

template <typename S>
AdagradState<S> make_adagrad(const Params<S>& params, double accumulator_init);

// L2 norm over every gradient coordinate, accumulated in double.
template <typename S>
double global_norm(const Params<S>& grads);

// Rescales grads in place so the global norm is at most max_norm. Returns
// the norm before clipping.
template <typename S>
double clip_global_norm(Params<S>& grads, double max_norm);

// Clip, then acc += g^2 and p -= lr * g / sqrt(acc) per coordinate.
// Throws Error(NonFiniteGradient) before touching anything if a gradient
// coordinate is NaN or infinite.
template <typename S>
void adagrad_update(Params<S>& params, Params<S> grads, AdagradState<S>& state, double learning_rate,
                    double clip);

}  // namespace tabletitle::seqmodel
