#pragma once

#include <span>
#include <vector>

#include "zenn/layer.hpp"

namespace zenn {

// Composition of layers; output dim of layer k must equal input dim of
// layer k+1. Trainable parameters are flattened layer by layer in order,
// each layer in its own documented layout.
struct DeepModel {
  std::vector<Layer> layers;

  void validate() const;
  int input_dim() const;
  int output_dim() const;
  int param_count() const;
};

std::vector<double> model_forward(const DeepModel& model, std::span<const double> x);

// Flat parameter gradient of upstream^T * d(model output)/d(theta).
std::vector<double> model_backward(const DeepModel& model, std::span<const double> x,
                                   std::span<const double> upstream);

// Reusable forward/backward workspace; avoids reallocating the per-layer
// activation buffers in training loops.
struct DeepWorkspace {
  std::vector<std::vector<double>> acts;  // acts[k] = input of layer k; acts[L] = output
  std::vector<std::vector<double>> ws;    // per-layer intermediates
  std::vector<double> xgrad_a, xgrad_b;
};

void model_forward_ws(const DeepModel& model, std::span<const double> x, DeepWorkspace& w);

// Runs backward from the cached forward pass in `w`, accumulating (+=)
// into pgrad. Returns nothing; the input gradient is discarded.
void model_backward_ws(const DeepModel& model, std::span<const double> upstream, DeepWorkspace& w,
                       std::span<double> pgrad);

void get_params(const DeepModel& model, std::span<double> out);
void set_params(DeepModel& model, std::span<const double> in);
void axpy_params(DeepModel& model, double c, std::span<const double> v);

}  // namespace zenn
