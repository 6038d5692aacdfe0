#pragma once

#include <cstddef>
#include <cstdint>

namespace tabletitle::seqmodel {

struct Hyperparams {
  std::size_t embedding_dim = 128;
  std::size_t hidden_dim = 256;
  double learning_rate = 0.15;
  double gradient_clip = 2.0;  // global L2 norm
  std::size_t batch_size = 64;
  std::size_t max_source_len = 150;
  double init_magnitude = 0.02;
  double accumulator_init = 0.1;
  std::size_t patience = 5;       // evaluations without improvement
  std::uint64_t seed = 1;
  bool gen_bias = true;           // learnable bias inside the p_gen sigmoid
  std::size_t eval_interval = 0;  // optimizer steps between evaluations; 0 = once per epoch
  std::size_t max_epochs = 100;
  double target_loss = 0.0;       // stop once validation loss <= this; 0 disables

  // Throws Error(Usage) on non-positive dims or clip.
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

}  // namespace tabletitle::seqmodel
