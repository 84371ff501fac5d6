#pragma once

#include <string>
#include <string_view>

namespace zenn {

enum class Activation { sine, cosine, relu, sigmoid, identity };

struct ActEval {
  double value;
  double deriv;
};

// Value and derivative of the activation at x. The ReLU derivative at
// exactly 0 is defined as 0.
ActEval activation_eval(Activation act, double x);

inline double act_value(Activation act, double x) { return activation_eval(act, x).value; }
inline double act_deriv(Activation act, double x) { return activation_eval(act, x).deriv; }

const char* to_string(Activation act);
bool activation_from_string(std::string_view name, Activation& out);

}  // namespace zenn
