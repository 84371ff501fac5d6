#include "zenn/activation.hpp"

#include <cmath>

namespace zenn {

ActEval activation_eval(Activation act, double x) {
  switch (act) {
    case Activation::sine:
      return {std::sin(x), std::cos(x)};
    case Activation::cosine:
      return {std::cos(x), -std::sin(x)};
    case Activation::relu:
      return {x > 0.0 ? x : 0.0, x > 0.0 ? 1.0 : 0.0};
    case Activation::sigmoid: {
      // Evaluate through exp(-|x|) so neither branch overflows.
      double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : [&] {
        double e = std::exp(x);
        return e / (1.0 + e);
      }();
      return {s, s * (1.0 - s)};
    }
    case Activation::identity:
      return {x, 1.0};
  }
  return {0.0, 0.0};
}

const char* to_string(Activation act) {
  switch (act) {
    case Activation::sine: return "sine";
    case Activation::cosine: return "cosine";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::identity: return "identity";
  }
  return "?";
}

bool activation_from_string(std::string_view name, Activation& out) {
  if (name == "sine") out = Activation::sine;
  else if (name == "cosine") out = Activation::cosine;
  else if (name == "relu") out = Activation::relu;
  else if (name == "sigmoid") out = Activation::sigmoid;
  else if (name == "identity") out = Activation::identity;
  else return false;
  return true;
}

}  // namespace zenn
