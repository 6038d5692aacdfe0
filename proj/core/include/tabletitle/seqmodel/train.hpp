#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tabletitle/seqmodel/hyperparams.hpp"
#include "tabletitle/seqmodel/model.hpp"

namespace tabletitle::seqmodel {

struct TrainLogRow {
  std::size_t step = 0;
  double train_loss = 0;  // mean batch loss since the previous evaluation
  double val_loss = 0;
  double wall_ms = 0;     // since training started
};

struct TrainOptions {
  ModelOptions model;  // mode and floor used for the loss; gen_bias comes from Hyperparams
  std::function<void(const TrainLogRow&)> on_evaluation;
};

enum class StopReason { Patience, MaxEpochs, TargetLoss };
std::string_view stop_reason_name(StopReason reason);

struct TrainResult {
  ModelParams best;  // parameters at the lowest validation loss
  double best_val_loss = 0;
  std::size_t best_step = 0;
  std::size_t steps = 0;
  std::size_t epochs = 0;
  StopReason stop = StopReason::MaxEpochs;
  std::vector<TrainLogRow> log;
};

// Mini-batch Adagrad with early stopping on validation loss. The training
// set is reshuffled every epoch from the seeded generator. If `validation`
// is empty the training set stands in for it. Throws Error(EmptyCorpus) on
// an empty training set; propagates NonFiniteGradient.
TrainResult train(std::span<const EncodedExample> training, std::span<const EncodedExample> validation,
                  std::size_t vocab_size, const Hyperparams& hyper, const TrainOptions& options = {});

// Same, continuing from given parameters.
TrainResult train_from(ModelParams initial, std::span<const EncodedExample> training,
                       std::span<const EncodedExample> validation, const Hyperparams& hyper,
                       const TrainOptions& options = {});

// One tab-separated row per evaluation, with a header line.
void write_train_log(const std::string& path, std::span<const TrainLogRow> rows);

}  // namespace tabletitle::seqmodel
