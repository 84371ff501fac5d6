#include "zenn/model.hpp"

namespace zenn {

namespace {

template <typename Net>
void shallow_grad_accum(const Net& net, double x, double up, std::span<double> grad) {
  std::vector<double> g(static_cast<std::size_t>(4) * net.neurons.size());
  if constexpr (std::is_same_v<Net, ShallowZeNN>)
    zenn_backward(net, x, g);
  else
    mlp_backward(net, x, g);
  for (std::size_t i = 0; i < g.size(); ++i) grad[i] += up * g[i];
}

}  // namespace

int input_dim(const Model& m) {
  if (const auto* d = std::get_if<DeepModel>(&m)) return d->input_dim();
  return 1;
}

int output_dim(const Model& m) {
  if (const auto* d = std::get_if<DeepModel>(&m)) return d->output_dim();
  return 1;
}

int param_count(const Model& m) {
  return std::visit(
      [](const auto& net) -> int {
        using T = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<T, DeepModel>)
          return net.param_count();
        else
          return 4 * net.n;
      },
      m);
}

void model_eval(const Model& m, std::span<const double> x, std::span<double> y) {
  if (static_cast<int>(x.size()) != input_dim(m) || static_cast<int>(y.size()) != output_dim(m))
    throw DimensionMismatch("model_eval: dim mismatch");
  std::visit(
      [&](const auto& net) {
        using T = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<T, ShallowZeNN>)
          y[0] = zenn_forward(net, x[0]);
        else if constexpr (std::is_same_v<T, ShallowMLP>)
          y[0] = mlp_forward(net, x[0]);
        else {
          std::vector<double> out = model_forward(net, x);
          for (std::size_t i = 0; i < out.size(); ++i) y[i] = out[i];
        }
      },
      m);
}

void model_grad_accum(const Model& m, std::span<const double> x, std::span<const double> upstream,
                      std::span<double> grad) {
  if (static_cast<int>(grad.size()) != param_count(m))
    throw DimensionMismatch("model_grad_accum: gradient size mismatch");
  std::visit(
      [&](const auto& net) {
        using T = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<T, DeepModel>) {
          DeepWorkspace w;
          model_forward_ws(net, x, w);
          model_backward_ws(net, upstream, w, grad);
        } else {
          shallow_grad_accum(net, x[0], upstream[0], grad);
        }
      },
      m);
}

void get_params(const Model& m, std::span<double> out) {
  std::visit([&](const auto& net) { get_params(net, out); }, m);
}

void set_params(Model& m, std::span<const double> in) {
  std::visit([&](auto& net) { set_params(net, in); }, m);
}

void axpy_params(Model& m, double c, std::span<const double> v) {
  std::visit(
      [&](auto& net) {
        using T = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<T, DeepModel>) {
          axpy_params(net, c, v);
        } else {
          const std::size_t n = net.neurons.size();
          for (std::size_t i = 0; i < n; ++i) {
            net.neurons[i].w1 += c * v[i];
            net.neurons[i].b1 += c * v[n + i];
            net.neurons[i].w2 += c * v[2 * n + i];
            net.neurons[i].b2 += c * v[3 * n + i];
          }
        }
      },
      m);
}

}  // namespace zenn
