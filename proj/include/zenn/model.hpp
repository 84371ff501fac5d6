#pragma once

#include <variant>

#include "zenn/deep.hpp"
#include "zenn/shallow.hpp"

namespace zenn {

// Any trainable network. Shallow networks have scalar input and output
// (dimension 1 on both sides of the generic interface).
using Model = std::variant<ShallowZeNN, ShallowMLP, DeepModel>;

int input_dim(const Model& m);
int output_dim(const Model& m);
int param_count(const Model& m);

void model_eval(const Model& m, std::span<const double> x, std::span<double> y);

// grad += upstream^T * d(output)/d(theta), flat layout per model type.
void model_grad_accum(const Model& m, std::span<const double> x, std::span<const double> upstream,
                      std::span<double> grad);

void get_params(const Model& m, std::span<double> out);
void set_params(Model& m, std::span<const double> in);
void axpy_params(Model& m, double c, std::span<const double> v);

}  // namespace zenn
