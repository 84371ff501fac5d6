#pragma once

#include <span>

namespace zenn {

// Mean squared error over all samples and components. Both spans are
// flat (n * dim) and must have equal, nonzero size.
double mse(std::span<const double> pred, std::span<const double> truth);

// 10 * log10(max_value^2 / mse); +infinity when the inputs are identical.
double psnr(std::span<const double> pred, std::span<const double> truth, double max_value = 1.0);

}  // namespace zenn
