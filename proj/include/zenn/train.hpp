#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zenn/dataset.hpp"
#include "zenn/model.hpp"

namespace zenn {

struct TrainConfig {
  double learning_rate = 0.25;
  long epochs = 1000;
  std::uint64_t seed = 0;
  long log_interval = 100;
  double weight_decay = 0.0;

  void validate() const;
};

struct TraceRow {
  long epoch = 0;
  double train_mse = 0.0;
  std::optional<double> val_mse;
  std::optional<double> psnr;
  double wall_time_s = 0.0;
};

struct TrainTrace {
  std::vector<TraceRow> rows;
};

// Raised when the training loss stops being finite.
struct DivergenceError : std::runtime_error {
  long epoch;
  explicit DivergenceError(long e)
      : std::runtime_error("training diverged at epoch " + std::to_string(e)), epoch(e) {}
};

// Half sum of squared residuals over the training split (summed over
// output components). Throws on an empty training split.
double loss(const Model& model, const Dataset& data);

struct TrainResult {
  Model model;
  TrainTrace trace;
};

// Exactly config.epochs full-batch updates theta <- theta - lr * grad L.
// When weight_decay > 0 the loss gains (wd/2)*|theta|^2. The trace holds
// the initial state (epoch 0), every log_interval-th epoch and the final
// epoch, with metrics evaluated after the update. image_metrics adds
// validation PSNR (max value 1) to the trace.
TrainResult train_gd(Model model, const Dataset& data, const TrainConfig& config,
                     bool image_metrics = false);

// One-step function-space consistency check: the first-order prediction
//   -eta * sum_mu K(probe_x, X_mu) * (f(X_mu) - Y_mu)
// against the realized change of f(probe_x) after one gradient step of
// size eta. The gap shrinks as O(eta^2).
struct ResidualDelta {
  double predicted = 0.0;
  double actual = 0.0;
};
ResidualDelta residual_evolution_check(const ShallowZeNN& net, const Dataset& data, double probe_x,
                                       double eta);

// CSV export, header: epoch,train_mse,val_mse,psnr,wall_time_s. Missing
// values are blank. Wall times are blank unless include_wall_time is set,
// keeping default outputs byte-stable across runs.
void write_trace_csv(const TrainTrace& trace, const std::string& path,
                     bool include_wall_time = false);

}  // namespace zenn
