#include "zenn/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zenn {

double mse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("mse: size mismatch");
  if (pred.empty()) throw std::invalid_argument("mse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double r = pred[i] - truth[i];
    sum += r * r;
  }
  return sum / static_cast<double>(pred.size());
}

double psnr(std::span<const double> pred, std::span<const double> truth, double max_value) {
  double m = mse(pred, truth);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(max_value * max_value / m);
}

}  // namespace zenn
