#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "zenn/shallow.hpp"

using namespace zenn;

namespace {

ShallowZeNN pinned_zenn3() {
  ShallowZeNN net = ShallowZeNN::make(3, 1.1, Activation::sine);
  net.neurons[0] = {0.37, -0.21, 1.4, 0.11};
  net.neurons[1] = {-0.92, 0.53, 0.77, -0.4};
  net.neurons[2] = {0.15, 1.2, -0.66, 0.25};
  return net;
}

}  // namespace

TEST_CASE("zenn_forward basics") {
  ShallowZeNN zero = ShallowZeNN::make(5, 1.3, Activation::sine);
  CHECK(zenn_forward(zero, 0.7) == 0.0);
  CHECK(zenn_forward(zero, -12.0) == 0.0);

  ShallowZeNN one = ShallowZeNN::make(1, 1.1, Activation::sine);
  one.neurons[0] = {1.0, 0.0, 1.0, 0.0};
  CHECK(zenn_forward(one, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zenn_forward matches the extended-precision summation oracle") {
  ShallowZeNN net = pinned_zenn3();
  double v = zenn_forward(net, 0.83);
  // Frozen from a 50-digit independent summation.
  CHECK(oracle::rel_err(v, -0.36505369754809419) < 1e-12);
  CHECK(oracle::rel_err(v, oracle::zenn_forward_ref(net, 0.83)) < 1e-12);

  zenn::Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    ShallowZeNN r = oracle::random_zenn(rng, 1 + static_cast<int>(rng.uniform01() * 16), 1.2,
                                        Activation::sine);
    double x = rng.uniform(-2.0, 2.0);
    CHECK(oracle::rel_err(zenn_forward(r, x), oracle::zenn_forward_ref(r, x)) < 1e-12);
  }
}

TEST_CASE("mlp_forward basics and oracle") {
  ShallowMLP zero = ShallowMLP::make(4, 0.5, Activation::sine);
  CHECK(mlp_forward(zero, 3.0) == 0.0);

  ShallowMLP ones = ShallowMLP::make(4, 0.5, Activation::sine);
  for (NeuronParams& p : ones.neurons) p = {1.0, 0.0, 1.0, 0.0};
  CHECK(mlp_forward(ones, std::numbers::pi / 2) == doctest::Approx(2.0).epsilon(1e-15));

  ShallowMLP net = ShallowMLP::make(4, 0.5, Activation::sine);
  net.neurons[0] = {0.5, -0.3, 1.1, 0.2};
  net.neurons[1] = {-1.2, 0.8, 0.4, -0.1};
  net.neurons[2] = {0.33, 0.0, -0.9, 0.55};
  net.neurons[3] = {2.0, -1.5, 0.6, 0.05};
  CHECK(oracle::rel_err(mlp_forward(net, -0.37), 0.10251432571700486) < 1e-12);
  CHECK(oracle::rel_err(mlp_forward(net, -0.37), oracle::mlp_forward_ref(net, -0.37)) < 1e-12);
}

TEST_CASE("zenn_backward closed-form cases") {
  ShallowZeNN zero = ShallowZeNN::make(2, 1.0, Activation::sine);
  std::vector<double> g(8);
  zenn_backward(zero, 0.4, g);
  for (int i = 0; i < 6; ++i) CHECK(g[static_cast<std::size_t>(i)] == 0.0);
  CHECK(g[6] == 1.0);   // d/d b2_1
  CHECK(g[7] == 0.5);   // d/d b2_2

  ShallowZeNN lin = ShallowZeNN::make(1, 1.0, Activation::identity);
  lin.neurons[0] = {1.0, 0.0, 1.0, 0.0};
  std::vector<double> gl(4);
  zenn_backward(lin, 2.0, gl);
  CHECK(gl[0] == 2.0);  // w1
  CHECK(gl[1] == 1.0);  // b1
  CHECK(gl[2] == 2.0);  // w2
  CHECK(gl[3] == 1.0);  // b2
}

TEST_CASE("shallow gradients match central finite differences") {
  zenn::Rng rng(512);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 1 + static_cast<int>(rng.uniform01() * 8);
    Activation act = rep % 2 == 0 ? Activation::sine : Activation::sigmoid;
    double x = rng.uniform(-1.5, 1.5);

    ShallowZeNN zn = oracle::random_zenn(rng, n, 0.8 + rng.uniform01(), act);
    std::vector<double> p(static_cast<std::size_t>(4) * n);
    get_params(zn, p);
    std::vector<double> g(p.size());
    zenn_backward(zn, x, g);
    auto f = [&](std::span<const double> q) {
      ShallowZeNN tmp = zn;
      set_params(tmp, q);
      return zenn_forward(tmp, x);
    };
    CHECK(oracle::max_rel_err(g, oracle::fd_gradient(p, f)) < 1e-6);

    ShallowMLP ml = oracle::random_mlp(rng, n, 0.5, act);
    get_params(ml, p);
    mlp_backward(ml, x, g);
    auto fm = [&](std::span<const double> q) {
      ShallowMLP tmp = ml;
      set_params(tmp, q);
      return mlp_forward(tmp, x);
    };
    CHECK(oracle::max_rel_err(g, oracle::fd_gradient(p, fm)) < 1e-6);
  }
}

TEST_CASE("zenn_input_derivative matches finite differences") {
  zenn::Rng rng(77);
  for (int rep = 0; rep < 10; ++rep) {
    ShallowZeNN net = oracle::random_zenn(rng, 6, 1.4, Activation::sine);
    double x = rng.uniform(-1.0, 1.0);
    double h = 1e-6;
    double fd = (zenn_forward(net, x + h) - zenn_forward(net, x - h)) / (2.0 * h);
    CHECK(oracle::rel_err(zenn_input_derivative(net, x), fd) < 1e-6);
  }
}

TEST_CASE("neuron swap breaks zenn symmetry but not mlp symmetry") {
  zenn::Rng rng(2024);
  ShallowZeNN zn = oracle::random_zenn(rng, 5, 1.1, Activation::sine);
  ShallowZeNN swapped = zn;
  std::swap(swapped.neurons[1], swapped.neurons[3]);
  double x = 0.9;
  CHECK(std::abs(zenn_forward(zn, x) - zenn_forward(swapped, x)) > 1e-6);

  ShallowMLP ml = oracle::random_mlp(rng, 5, 0.5, Activation::sine);
  ShallowMLP mswapped = ml;
  std::swap(mswapped.neurons[1], mswapped.neurons[3]);
  CHECK(oracle::rel_err(mlp_forward(ml, x), mlp_forward(mswapped, x)) < 1e-12);
}

TEST_CASE("shallow parameter get/set round-trips") {
  zenn::Rng rng(5);
  ShallowZeNN net = oracle::random_zenn(rng, 4, 1.0, Activation::sine);
  std::vector<double> p(16), q(16);
  get_params(net, p);
  ShallowZeNN other = ShallowZeNN::make(4, 1.0, Activation::sine);
  set_params(other, p);
  get_params(other, q);
  CHECK(p == q);
}

TEST_CASE("shallow construction rejects invalid shapes") {
  CHECK_THROWS_AS(ShallowZeNN::make(0, 1.0, Activation::sine), std::invalid_argument);
  CHECK_THROWS_AS(ShallowZeNN::make(3, 0.0, Activation::sine), std::invalid_argument);
  CHECK_THROWS_AS(ShallowZeNN::make(3, -1.0, Activation::sine), std::invalid_argument);
  CHECK_THROWS_AS(ShallowMLP::make(0, 0.5, Activation::sine), std::invalid_argument);
  ShallowZeNN bad = ShallowZeNN::make(3, 1.0, Activation::sine);
  bad.neurons.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
