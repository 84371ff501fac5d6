#include "zenn/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "zenn/metrics.hpp"
#include "zenn/zentk.hpp"

namespace zenn {

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw std::invalid_argument("TrainConfig: learning rate must be finite and >= 0");
  if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
  if (log_interval < 1) throw std::invalid_argument("TrainConfig: log interval must be >= 1");
  if (!(weight_decay >= 0.0)) throw std::invalid_argument("TrainConfig: weight decay must be >= 0");
}

namespace {

std::vector<int> split_indices(const Dataset& data, Split s) {
  std::vector<int> idx;
  for (int i = 0; i < data.size(); ++i)
    if (data.split[static_cast<std::size_t>(i)] == s) idx.push_back(i);
  return idx;
}

// Fused forward + gradient accumulation for one sample. Activation values
// and derivatives are computed once, stashed, and reused for the gradient
// once the residual is known.
struct ShallowScratch {
  std::vector<double> val, der, decay;
};

template <typename Net>
void prepare_scratch(const Net& net, ShallowScratch& s) {
  const std::size_t n = net.neurons.size();
  s.val.resize(n);
  s.der.resize(n);
  s.decay.resize(n);
  if constexpr (std::is_same_v<Net, ShallowZeNN>) {
    for (std::size_t j = 0; j < n; ++j)
      s.decay[j] = std::pow(static_cast<double>(j + 1), -net.alpha);
  } else {
    double c = std::pow(static_cast<double>(net.n), -net.beta);
    for (std::size_t j = 0; j < n; ++j) s.decay[j] = c;
  }
}

template <typename Net>
double shallow_forward_stash(const Net& net, double x, ShallowScratch& s) {
  const std::size_t n = net.neurons.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const NeuronParams& p = net.neurons[j];
    double u;
    if constexpr (std::is_same_v<Net, ShallowZeNN>)
      u = p.w1 * static_cast<double>(j + 1) * x + p.b1;
    else
      u = p.w1 * x + p.b1;
    ActEval a = activation_eval(net.act, u);
    s.val[j] = a.value;
    s.der[j] = a.deriv;
    sum += s.decay[j] * (p.w2 * a.value + p.b2);
  }
  return sum;
}

template <typename Net>
void shallow_grad_from_stash(const Net& net, double x, const ShallowScratch& s, double scale,
                             std::span<double> grad) {
  const std::size_t n = net.neurons.size();
  for (std::size_t j = 0; j < n; ++j) {
    const NeuronParams& p = net.neurons[j];
    double inner = scale * s.decay[j] * p.w2 * s.der[j];
    if constexpr (std::is_same_v<Net, ShallowZeNN>)
      grad[j] += inner * static_cast<double>(j + 1) * x;
    else
      grad[j] += inner * x;
    grad[n + j] += inner;
    grad[2 * n + j] += scale * s.decay[j] * s.val[j];
    grad[3 * n + j] += scale * s.decay[j];
  }
}

// Shared epoch driver: accumulates the loss gradient over the training
// split and returns the data loss at the current parameters.
class GradDriver {
 public:
  GradDriver(const Model& model, const Dataset& data)
      : in_dim_(input_dim(model)), out_dim_(output_dim(model)) {
    train_ = split_indices(data, Split::train);
    if (train_.empty()) throw std::invalid_argument("train_gd: empty training split");
    if (data.in_dim != in_dim_ || data.out_dim != out_dim_)
      throw DimensionMismatch("train_gd: model/dataset dims do not match");
    resid_.resize(static_cast<std::size_t>(out_dim_));
    std::visit(
        [&](const auto& net) {
          using T = std::decay_t<decltype(net)>;
          if constexpr (!std::is_same_v<T, DeepModel>) prepare_scratch(net, scratch_);
        },
        model);
  }

  double accumulate(const Model& model, const Dataset& data, std::span<double> grad) {
    double total = 0.0;
    std::visit(
        [&](const auto& net) {
          using T = std::decay_t<decltype(net)>;
          if constexpr (std::is_same_v<T, DeepModel>) {
            for (int i : train_) {
              model_forward_ws(net, data.input(i), ws_);
              std::span<const double> y = data.target(i);
              const std::vector<double>& out = ws_.acts.back();
              for (int c = 0; c < out_dim_; ++c) {
                double r = out[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(c)];
                resid_[static_cast<std::size_t>(c)] = r;
                total += 0.5 * r * r;
              }
              model_backward_ws(net, resid_, ws_, grad);
            }
          } else {
            for (int i : train_) {
              double x = data.input(i)[0];
              double r = shallow_forward_stash(net, x, scratch_) - data.target(i)[0];
              total += 0.5 * r * r;
              shallow_grad_from_stash(net, x, scratch_, r, grad);
            }
          }
        },
        model);
    return total;
  }

  const std::vector<int>& train_indices() const { return train_; }

 private:
  int in_dim_, out_dim_;
  std::vector<int> train_;
  std::vector<double> resid_;
  ShallowScratch scratch_;
  DeepWorkspace ws_;
};

double split_mse(const Model& model, const Dataset& data, const std::vector<int>& idx,
                 std::vector<double>& buf) {
  if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
  const int out_dim = output_dim(model);
  buf.resize(static_cast<std::size_t>(out_dim));
  double total = 0.0;
  for (int i : idx) {
    model_eval(model, data.input(i), buf);
    std::span<const double> y = data.target(i);
    for (int c = 0; c < out_dim; ++c) {
      double r = buf[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(c)];
      total += r * r;
    }
  }
  return total / (static_cast<double>(idx.size()) * out_dim);
}

}  // namespace

double loss(const Model& model, const Dataset& data) {
  std::vector<int> train = split_indices(data, Split::train);
  if (train.empty()) throw std::invalid_argument("loss: empty training split");
  if (data.in_dim != input_dim(model) || data.out_dim != output_dim(model))
    throw DimensionMismatch("loss: model/dataset dims do not match");
  const int out_dim = output_dim(model);
  std::vector<double> y(static_cast<std::size_t>(out_dim));
  double total = 0.0;
  for (int i : train) {
    model_eval(model, data.input(i), y);
    std::span<const double> t = data.target(i);
    for (int c = 0; c < out_dim; ++c) {
      double r = y[static_cast<std::size_t>(c)] - t[static_cast<std::size_t>(c)];
      total += 0.5 * r * r;
    }
  }
  return total;
}

TrainResult train_gd(Model model, const Dataset& data, const TrainConfig& config,
                     bool image_metrics) {
  config.validate();
  data.validate();
  GradDriver driver(model, data);
  const std::size_t np = static_cast<std::size_t>(param_count(model));
  std::vector<double> grad(np), params(np), buf;
  std::vector<int> train_idx = driver.train_indices();
  std::vector<int> val_idx = split_indices(data, Split::validation);

  TrainTrace trace;
  auto t0 = std::chrono::steady_clock::now();
  auto log_row = [&](long epoch) {
    TraceRow row;
    row.epoch = epoch;
    row.train_mse = split_mse(model, data, train_idx, buf);
    if (!val_idx.empty()) {
      row.val_mse = split_mse(model, data, val_idx, buf);
      if (image_metrics)
        row.psnr = *row.val_mse == 0.0 ? std::numeric_limits<double>::infinity()
                                       : 10.0 * std::log10(1.0 / *row.val_mse);
    }
    row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    trace.rows.push_back(row);
    return row.train_mse;
  };

  log_row(0);
  for (long epoch = 1; epoch <= config.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double l = driver.accumulate(model, data, grad);
    if (!std::isfinite(l)) throw DivergenceError(epoch);
    if (config.weight_decay > 0.0) {
      get_params(model, params);
      for (std::size_t i = 0; i < np; ++i) grad[i] += config.weight_decay * params[i];
    }
    axpy_params(model, -config.learning_rate, grad);
    if (epoch % config.log_interval == 0 || epoch == config.epochs) {
      double train_mse = log_row(epoch);
      if (epoch == config.epochs && !std::isfinite(train_mse)) throw DivergenceError(epoch);
    }
  }
  return {std::move(model), std::move(trace)};
}

ResidualDelta residual_evolution_check(const ShallowZeNN& net, const Dataset& data, double probe_x,
                                       double eta) {
  if (data.in_dim != 1 || data.out_dim != 1)
    throw std::invalid_argument("residual_evolution_check: scalar datasets only");
  std::vector<int> train = split_indices(data, Split::train);
  if (train.empty()) throw std::invalid_argument("residual_evolution_check: empty training split");

  const std::size_t np = static_cast<std::size_t>(4) * net.neurons.size();
  std::vector<double> grad(np, 0.0), g(np);
  double predicted = 0.0;
  for (int i : train) {
    double x = data.input(i)[0];
    double r = zenn_forward(net, x) - data.target(i)[0];
    zenn_backward(net, x, g);
    for (std::size_t k = 0; k < np; ++k) grad[k] += r * g[k];
    predicted -= eta * zentk_eval(net, probe_x, x) * r;
  }
  ShallowZeNN stepped = net;
  const std::size_t n = net.neurons.size();
  for (std::size_t i = 0; i < n; ++i) {
    stepped.neurons[i].w1 -= eta * grad[i];
    stepped.neurons[i].b1 -= eta * grad[n + i];
    stepped.neurons[i].w2 -= eta * grad[2 * n + i];
    stepped.neurons[i].b2 -= eta * grad[3 * n + i];
  }
  return {predicted, zenn_forward(stepped, probe_x) - zenn_forward(net, probe_x)};
}

void write_trace_csv(const TrainTrace& trace, const std::string& path, bool include_wall_time) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot create CSV file: " + path);
  std::fprintf(f, "epoch,train_mse,val_mse,psnr,wall_time_s\n");
  for (const TraceRow& r : trace.rows) {
    std::fprintf(f, "%ld,%.10g,", r.epoch, r.train_mse);
    if (r.val_mse) std::fprintf(f, "%.10g", *r.val_mse);
    std::fprintf(f, ",");
    if (r.psnr) std::fprintf(f, "%.10g", *r.psnr);
    std::fprintf(f, ",");
    if (include_wall_time) std::fprintf(f, "%.3f", r.wall_time_s);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace zenn
