#include "zenn/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "zenn/rng.hpp"

namespace zenn {

int Dataset::count(Split s) const {
  int c = 0;
  for (Split v : split)
    if (v == s) ++c;
  return c;
}

void Dataset::push(std::span<const double> x, std::span<const double> y, Split s) {
  if (static_cast<int>(x.size()) != in_dim || static_cast<int>(y.size()) != out_dim)
    throw std::invalid_argument("Dataset::push: dim mismatch");
  inputs.insert(inputs.end(), x.begin(), x.end());
  targets.insert(targets.end(), y.begin(), y.end());
  split.push_back(s);
}

void Dataset::validate() const {
  std::size_t n = split.size();
  if (inputs.size() != n * static_cast<std::size_t>(in_dim) ||
      targets.size() != n * static_cast<std::size_t>(out_dim))
    throw std::invalid_argument("Dataset: inconsistent storage sizes");
}

Dataset random_split(Dataset data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("random_split: fraction must be in (0, 1)");
  const int n = data.size();
  const int n_train = static_cast<int>(std::floor(train_fraction * n));
  if (n_train < 1 || n - n_train < 1)
    throw std::invalid_argument("random_split: dataset too small for both splits");
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    int j = rng.uniform_int(0, i);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  for (int i = 0; i < n; ++i)
    data.split[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] =
        i < n_train ? Split::train : Split::validation;
  return data;
}

}  // namespace zenn
