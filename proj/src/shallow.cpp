#include "zenn/shallow.hpp"

#include <cmath>
#include <stdexcept>

namespace zenn {

ShallowZeNN ShallowZeNN::make(int n, double alpha, Activation act) {
  ShallowZeNN net;
  net.n = n;
  net.alpha = alpha;
  net.act = act;
  net.neurons.assign(static_cast<std::size_t>(n), NeuronParams{});
  net.validate();
  return net;
}

void ShallowZeNN::validate() const {
  if (n <= 0) throw std::invalid_argument("ShallowZeNN: width must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("ShallowZeNN: alpha must be > 0");
  if (neurons.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("ShallowZeNN: neuron count does not match width");
}

ShallowMLP ShallowMLP::make(int n, double beta, Activation act) {
  ShallowMLP net;
  net.n = n;
  net.beta = beta;
  net.act = act;
  net.neurons.assign(static_cast<std::size_t>(n), NeuronParams{});
  net.validate();
  return net;
}

void ShallowMLP::validate() const {
  if (n <= 0) throw std::invalid_argument("ShallowMLP: width must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("ShallowMLP: beta must be > 0");
  if (neurons.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("ShallowMLP: neuron count does not match width");
}

double zenn_forward(const ShallowZeNN& net, double x) {
  double sum = 0.0;
  for (int j = 1; j <= net.n; ++j) {
    const NeuronParams& p = net.neurons[static_cast<std::size_t>(j - 1)];
    double u = p.w1 * static_cast<double>(j) * x + p.b1;
    sum += std::pow(static_cast<double>(j), -net.alpha) * (p.w2 * act_value(net.act, u) + p.b2);
  }
  return sum;
}

double mlp_forward(const ShallowMLP& net, double x) {
  double sum = 0.0;
  for (const NeuronParams& p : net.neurons) {
    sum += p.w2 * act_value(net.act, p.w1 * x + p.b1) + p.b2;
  }
  return std::pow(static_cast<double>(net.n), -net.beta) * sum;
}

void zenn_backward(const ShallowZeNN& net, double x, std::span<double> grad) {
  const std::size_t n = static_cast<std::size_t>(net.n);
  if (grad.size() != 4 * n) throw std::invalid_argument("zenn_backward: gradient size must be 4n");
  for (int j = 1; j <= net.n; ++j) {
    const NeuronParams& p = net.neurons[static_cast<std::size_t>(j - 1)];
    double jd = static_cast<double>(j);
    double scale = std::pow(jd, -net.alpha);
    ActEval s = activation_eval(net.act, p.w1 * jd * x + p.b1);
    std::size_t i = static_cast<std::size_t>(j - 1);
    grad[i] = scale * p.w2 * s.deriv * jd * x;  // d/d w1_j
    grad[n + i] = scale * p.w2 * s.deriv;       // d/d b1_j
    grad[2 * n + i] = scale * s.value;          // d/d w2_j
    grad[3 * n + i] = scale;                    // d/d b2_j
  }
}

void mlp_backward(const ShallowMLP& net, double x, std::span<double> grad) {
  const std::size_t n = static_cast<std::size_t>(net.n);
  if (grad.size() != 4 * n) throw std::invalid_argument("mlp_backward: gradient size must be 4n");
  double scale = std::pow(static_cast<double>(net.n), -net.beta);
  for (std::size_t i = 0; i < n; ++i) {
    const NeuronParams& p = net.neurons[i];
    ActEval s = activation_eval(net.act, p.w1 * x + p.b1);
    grad[i] = scale * p.w2 * s.deriv * x;
    grad[n + i] = scale * p.w2 * s.deriv;
    grad[2 * n + i] = scale * s.value;
    grad[3 * n + i] = scale;
  }
}

double zenn_input_derivative(const ShallowZeNN& net, double x) {
  double sum = 0.0;
  for (int j = 1; j <= net.n; ++j) {
    const NeuronParams& p = net.neurons[static_cast<std::size_t>(j - 1)];
    double jd = static_cast<double>(j);
    double u = p.w1 * jd * x + p.b1;
    sum += std::pow(jd, -net.alpha) * p.w2 * act_deriv(net.act, u) * p.w1 * jd;
  }
  return sum;
}

namespace {

template <typename Net>
void get_params_impl(const Net& net, std::span<double> out) {
  const std::size_t n = net.neurons.size();
  if (out.size() != 4 * n) throw std::invalid_argument("get_params: size must be 4n");
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = net.neurons[i].w1;
    out[n + i] = net.neurons[i].b1;
    out[2 * n + i] = net.neurons[i].w2;
    out[3 * n + i] = net.neurons[i].b2;
  }
}

template <typename Net>
void set_params_impl(Net& net, std::span<const double> in) {
  const std::size_t n = net.neurons.size();
  if (in.size() != 4 * n) throw std::invalid_argument("set_params: size must be 4n");
  for (std::size_t i = 0; i < n; ++i) {
    net.neurons[i].w1 = in[i];
    net.neurons[i].b1 = in[n + i];
    net.neurons[i].w2 = in[2 * n + i];
    net.neurons[i].b2 = in[3 * n + i];
  }
}

}  // namespace

void get_params(const ShallowZeNN& net, std::span<double> out) { get_params_impl(net, out); }
void set_params(ShallowZeNN& net, std::span<const double> in) { set_params_impl(net, in); }
void get_params(const ShallowMLP& net, std::span<double> out) { get_params_impl(net, out); }
void set_params(ShallowMLP& net, std::span<const double> in) { set_params_impl(net, in); }

}  // namespace zenn
