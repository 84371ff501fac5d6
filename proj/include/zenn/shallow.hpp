#pragma once

#include <span>
#include <vector>

#include "zenn/activation.hpp"

namespace zenn {

struct NeuronParams {
  double w1 = 0.0;  // inner weight
  double b1 = 0.0;  // inner bias
  double w2 = 0.0;  // outer weight
  double b2 = 0.0;  // outer bias
};

// Shallow scalar network whose j-th perceptron sees the rescaled input
// j*x and contributes with the fixed weight j^(-alpha):
//
//   f(x) = sum_{j=1..n} j^(-alpha) * ( w2_j * act(w1_j * j * x + b1_j) + b2_j )
//
// The decay exponent alpha > 0 is not trainable. Neuron index j runs
// from 1; neurons[0] is j = 1.
struct ShallowZeNN {
  int n = 0;
  double alpha = 1.0;
  Activation act = Activation::sine;
  std::vector<NeuronParams> neurons;

  static ShallowZeNN make(int n, double alpha, Activation act);
  void validate() const;
};

// Classical width-normalized shallow perceptron average:
//
//   g(x) = n^(-beta) * sum_{j=1..n} ( w2_j * act(w1_j * x + b1_j) + b2_j )
struct ShallowMLP {
  int n = 0;
  double beta = 0.5;
  Activation act = Activation::sine;
  std::vector<NeuronParams> neurons;

  static ShallowMLP make(int n, double beta, Activation act);
  void validate() const;
};

double zenn_forward(const ShallowZeNN& net, double x);
double mlp_forward(const ShallowMLP& net, double x);

// Parameter gradient d f / d theta. Both networks use the same flat
// parameter layout of length 4n:
//
//   [ w1_1..w1_n | b1_1..b1_n | w2_1..w2_n | b2_1..b2_n ]
//
// grad must have size 4n; values are overwritten.
void zenn_backward(const ShallowZeNN& net, double x, std::span<double> grad);
void mlp_backward(const ShallowMLP& net, double x, std::span<double> grad);

// d f / d x, needed when a shallow network sits inside a larger model.
double zenn_input_derivative(const ShallowZeNN& net, double x);

// Flat parameter access in the layout documented above.
void get_params(const ShallowZeNN& net, std::span<double> out);
void set_params(ShallowZeNN& net, std::span<const double> in);
void get_params(const ShallowMLP& net, std::span<double> out);
void set_params(ShallowMLP& net, std::span<const double> in);

}  // namespace zenn
