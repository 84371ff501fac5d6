#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "zenn/activation.hpp"
#include "zenn/shallow.hpp"

namespace zenn {

struct Layer;

// Thrown when an input/upstream/gradient span does not match the layer's
// declared dimensions.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Fully connected layer with an optional fixed j^(-alpha) weighting of
// output unit j (alpha = 0 gives the plain dense layer):
//
//   y_j = j^(-alpha) * act( sum_i w[j,i] x_i + b_j )
struct DenseLayer {
  int in = 0, out = 0;
  double alpha = 0.0;
  Activation act = Activation::relu;
  std::vector<double> w;      // out x in, row-major
  std::vector<double> b;      // out
  std::vector<double> decay;  // j^(-alpha), cached

  static DenseLayer make(int in, int out, double alpha, Activation act);

  int input_dim() const { return in; }
  int output_dim() const { return out; }
  int param_count() const { return out * in + out; }
  int ws_size() const { return out; }
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;
};

// Full frequency-lattice layer: input dimension d, output dimension n^d.
// The entry for lattice vector (j_1, ..., j_d), all j_i in {1..n}, is
//
//   (prod_i j_i)^(-alpha) * act( sum_i ( w[i,j_i] * j_i * x_i + b[i,j_i] ) )
//
// flattened row-major (j_d fastest).
struct OZeNNLayer {
  int d = 0, n = 0;
  double alpha = 0.0;
  Activation act = Activation::sine;
  std::vector<double> w;      // d x n, row-major
  std::vector<double> b;      // d x n
  std::vector<double> decay;  // (prod j_i)^(-alpha) per flattened entry

  static OZeNNLayer make(int d, int n, double alpha, Activation act);

  int input_dim() const { return d; }
  int output_dim() const;  // n^d
  int param_count() const { return 2 * d * n; }
  int ws_size() const { return output_dim(); }
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;
};

// Diagonal of the frequency lattice: one shared scale j per output unit,
//
//   y_j = j^(-alpha) * act( sum_i w[i,j] * j * x_i + b_j ),  j in {1..n}.
struct RadZeNNLayer {
  int d = 0, n = 0;
  double alpha = 0.0;
  Activation act = Activation::sine;
  std::vector<double> w;      // d x n, row-major
  std::vector<double> b;      // n
  std::vector<double> decay;  // j^(-alpha)

  static RadZeNNLayer make(int d, int n, double alpha, Activation act);

  int input_dim() const { return d; }
  int output_dim() const { return n; }
  int param_count() const { return d * n + n; }
  int ws_size() const { return n; }
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;
};

// Random subsample of the frequency lattice: m rows of lattice indices,
// each drawn i.i.d. uniform over {1..n}^d at construction (not trainable),
//
//   y_r = (prod_i idx[r,i])^(-alpha) * act( sum_i idx[r,i] * x_i * w[i,r] + b_r ).
struct RandoZeNNLayer {
  int d = 0, n = 0, m = 0;
  double alpha = 0.0;
  Activation act = Activation::sine;
  std::vector<std::int32_t> idx;  // m x d, row-major, entries in {1..n}
  std::vector<double> w;          // d x m, row-major
  std::vector<double> b;          // m
  std::vector<double> decay;      // per row r

  static RandoZeNNLayer make(int d, int n, int m, double alpha, Activation act, std::uint64_t seed);

  int input_dim() const { return d; }
  int output_dim() const { return m; }
  int param_count() const { return d * m + m; }
  int ws_size() const { return m; }
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;
  void refresh_decay();
};

// Sinusoidal embedding x -> [sin(2 pi B x), cos(2 pi B x)] with the n x d
// frequency matrix B drawn from N(0, rho^2) at construction. B is a
// trainable parameter only when `trainable` is set.
struct FourierLayer {
  int d = 0, n = 0;
  double rho = 1.0;
  bool trainable = false;
  std::vector<double> bmat;  // n x d, row-major

  static FourierLayer make(int d, int n, double rho, bool trainable, std::uint64_t seed);

  int input_dim() const { return d; }
  int output_dim() const { return 2 * n; }
  int param_count() const { return trainable ? n * d : 0; }
  int ws_size() const { return n; }
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;
};

// Sum-of-univariate-functions layer: every edge (q, p) of the bipartite
// graph carries its own shallow scalar ZeNN, and
//
//   y_q = sum_p edge(q, p)(x_p).
struct KAZeNNLayer {
  int in = 0, out = 0;
  std::vector<ShallowZeNN> edges;  // out x in, row-major (q major)

  static KAZeNNLayer make(int in, int out, int edge_n, double edge_alpha, Activation act);

  const ShallowZeNN& edge(int q, int p) const { return edges[static_cast<std::size_t>(q) * in + p]; }
  ShallowZeNN& edge(int q, int p) { return edges[static_cast<std::size_t>(q) * in + p]; }

  int input_dim() const { return in; }
  int output_dim() const { return out; }
  int param_count() const;
  int ws_size() const { return 0; }
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;
};

// Applies every part to the same input and concatenates the outputs.
// Used for the paired sine/cosine first layers of the image models.
struct ConcatLayer {
  std::vector<Layer> parts;

  static ConcatLayer make(std::vector<Layer> parts);

  int input_dim() const;
  int output_dim() const;
  int param_count() const;
  int ws_size() const;
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;
};

using LayerVariant = std::variant<DenseLayer, OZeNNLayer, RadZeNNLayer, RandoZeNNLayer,
                                  FourierLayer, KAZeNNLayer, ConcatLayer>;

struct Layer {
  LayerVariant v;

  Layer() = default;
  template <typename T>
  Layer(T layer) : v(std::move(layer)) {}

  int input_dim() const;
  int output_dim() const;
  int param_count() const;
  int ws_size() const;

  // ws receives layer-defined intermediates (typically pre-activations)
  // that backward() reuses; it must have size ws_size().
  void forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const;

  // pgrad accumulates (+=) and must have size param_count(); xgrad is
  // overwritten. ws must hold the values written by forward() at x.
  void backward(std::span<const double> x, std::span<const double> ws, std::span<const double> up,
                std::span<double> pgrad, std::span<double> xgrad) const;

  // Flat trainable-parameter block, layout documented per layer type
  // (weights first, then biases; concat layers chain their parts).
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);
  void axpy_params(double c, std::span<const double> v);
};

// Convenience wrappers that allocate their own scratch.
std::vector<double> layer_forward(const Layer& layer, std::span<const double> x);
struct LayerGradients {
  std::vector<double> param_grad;
  std::vector<double> input_grad;
};
LayerGradients layer_backward(const Layer& layer, std::span<const double> x,
                              std::span<const double> upstream);

}  // namespace zenn
