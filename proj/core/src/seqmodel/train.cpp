#include "tabletitle/seqmodel/train.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include <spdlog/spdlog.h>

#include "tabletitle/error.hpp"
#include "tabletitle/random.hpp"
#include "tabletitle/seqmodel/optim.hpp"

namespace tabletitle::seqmodel {

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::Patience: return "patience";
    case StopReason::MaxEpochs: return "max_epochs";
    case StopReason::TargetLoss: return "target_loss";
  }
  return "unknown";
}

TrainResult train(std::span<const EncodedExample> training, std::span<const EncodedExample> validation,
                  std::size_t vocab_size, const Hyperparams& hyper, const TrainOptions& options) {
  hyper.validate();
  return train_from(init_params<float>(hyper, vocab_size, hyper.seed), training, validation, hyper, options);
}

TrainResult train_from(ModelParams params, std::span<const EncodedExample> training,
                       std::span<const EncodedExample> validation, const Hyperparams& hyper,
                       const TrainOptions& options) {
  hyper.validate();
  if (training.empty()) throw Error(ErrorCode::EmptyCorpus, "training set is empty");
  if (validation.empty()) validation = training;

  ModelOptions model = options.model;
  model.gen_bias = hyper.gen_bias;

  const auto started = std::chrono::steady_clock::now();
  Rng rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
  AdagradState<float> state = make_adagrad(params, hyper.accumulator_init);
  std::vector<std::size_t> order(training.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<EncodedExample> batch;

  TrainResult result;
  result.best = params;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  std::size_t bad_evaluations = 0;
  double loss_sum = 0;
  std::size_t loss_batches = 0;
  const std::size_t batches_per_epoch = (training.size() + hyper.batch_size - 1) / hyper.batch_size;
  const std::size_t interval = hyper.eval_interval == 0 ? batches_per_epoch : hyper.eval_interval;

  // Returns true when training should stop.
  auto evaluate = [&]() {
    TrainLogRow row;
    row.step = result.steps;
    row.train_loss = loss_batches ? loss_sum / static_cast<double>(loss_batches) : 0.0;
    row.val_loss = evaluate_loss(params, validation, model);
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    loss_sum = 0;
    loss_batches = 0;
    result.log.push_back(row);
    spdlog::debug("step {} train {:.5f} val {:.5f}", row.step, row.train_loss, row.val_loss);
    if (options.on_evaluation) options.on_evaluation(row);
    if (row.val_loss < result.best_val_loss) {
      result.best_val_loss = row.val_loss;
      result.best = params;
      result.best_step = row.step;
      bad_evaluations = 0;
    } else if (++bad_evaluations > hyper.patience) {
      result.stop = StopReason::Patience;
      return true;
    }
    if (hyper.target_loss > 0 && row.val_loss <= hyper.target_loss) {
      result.stop = StopReason::TargetLoss;
      return true;
    }
    return false;
  };

  for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    result.epochs = epoch + 1;
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const std::size_t end = std::min(order.size(), start + hyper.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(training[order[i]]);
      ForwardResult<float> fwd = forward_loss<float>(params, batch, model);
      Params<float> grads = backward<float>(params, fwd, model);
      adagrad_update(params, std::move(grads), state, hyper.learning_rate, hyper.gradient_clip);
      if (!all_finite(params))
        throw Error(ErrorCode::NonFiniteGradient, "parameters became non-finite at step " + std::to_string(result.steps));
      loss_sum += fwd.loss;
      ++loss_batches;
      ++result.steps;
      if (result.steps % interval == 0 && evaluate()) return result;
    }
  }
  result.stop = StopReason::MaxEpochs;
  if (loss_batches > 0) evaluate();
  return result;
}

void write_train_log(const std::string& path, std::span<const TrainLogRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "step\ttrain_loss\tval_loss\twall_ms\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu\t%.6f\t%.6f\t%.1f\n", r.step, r.train_loss, r.val_loss, r.wall_ms);
    out << buf;
  }
}

}  // namespace tabletitle::seqmodel
