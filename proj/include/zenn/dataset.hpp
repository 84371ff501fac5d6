#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace zenn {

enum class Split { train, validation };

// Paired inputs/targets with per-sample split labels, stored row-major.
struct Dataset {
  int in_dim = 1;
  int out_dim = 1;
  std::vector<double> inputs;   // n * in_dim
  std::vector<double> targets;  // n * out_dim
  std::vector<Split> split;     // n, defaults to train

  int size() const { return static_cast<int>(split.size()); }
  std::span<const double> input(int i) const {
    return {inputs.data() + static_cast<std::size_t>(i) * in_dim, static_cast<std::size_t>(in_dim)};
  }
  std::span<const double> target(int i) const {
    return {targets.data() + static_cast<std::size_t>(i) * out_dim, static_cast<std::size_t>(out_dim)};
  }
  int count(Split s) const;
  void push(std::span<const double> x, std::span<const double> y, Split s = Split::train);
  void validate() const;
};

// Relabels exactly floor(train_fraction * n) samples as train (chosen by a
// seeded shuffle) and the rest as validation.
Dataset random_split(Dataset data, double train_fraction, std::uint64_t seed);

}  // namespace zenn
