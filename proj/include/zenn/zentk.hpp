#pragma once

#include <span>
#include <string>
#include <vector>

#include "zenn/dataset.hpp"
#include "zenn/deep.hpp"
#include "zenn/shallow.hpp"

namespace zenn {

// Tangent kernel of a shallow ZeNN in closed form,
//
//   K(x,y) = xy * sum_j w2_j^2 j^(2-2a) s'(u_j(x)) s'(u_j(y))
//          + sum_j j^(-2a) [ 1 + s(u_j(x)) s(u_j(y)) + w2_j^2 s'(u_j(x)) s'(u_j(y)) ]
//
// with u_j(z) = w1_j * j * z + b1_j. Equals the inner product of the
// parameter gradients at x and y.
double zentk_eval(const ShallowZeNN& net, double x, double y);

struct KernelMatrix {
  int n = 0;
  std::vector<double> k;       // n x n, row-major, exactly symmetric
  std::vector<double> points;  // the n scalar inputs (may be empty)

  double at(int i, int j) const { return k[static_cast<std::size_t>(i) * n + j]; }
};

KernelMatrix zentk_gram(const ShallowZeNN& net, std::span<const double> points);

// Empirical tangent kernel of a scalar-output deep model: Gram matrix of
// parameter Jacobians.
KernelMatrix empirical_gram(const DeepModel& model, const std::vector<std::vector<double>>& points);

// All eigenvalues of a symmetric matrix (row-major, full storage) by
// cyclic Jacobi rotations, ascending. Intended for the small matrices
// produced here.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

double smallest_eigenvalue(const KernelMatrix& k);

// Second derivative of the kernel in the outer weight of neuron j
// (1-based):  2 * j^(2-2a) * (xy + 1/j^2) * s'(u_j(x)) * s'(u_j(y)).
// Nonzero at generic parameters, witnessing that the kernel moves with
// the parameters at every width.
double feature_probe(const ShallowZeNN& net, int j, double x, double y);

// ---------------------------------------------------------------------------
// Loss-decay diagnostic along a training run.

struct KernelTracePoint {
  long epoch = 0;
  double loss = 0.0;
  double lambda_min = 0.0;  // smallest Gram eigenvalue at this epoch
};

struct GronwallStep {
  long epoch = 0;
  double loss = 0.0;
  double bound = 0.0;   // loss(0) * exp(-2 * integral of lambda_min)
  double margin = 0.0;  // bound - loss
  bool violated = false;
};

struct GronwallReport {
  std::vector<GronwallStep> steps;
  int violations = 0;
};

// Integrates lambda_min over continuous time t = epoch * eta by the
// trapezoid rule and compares the resulting exponential bound with the
// recorded losses. Violations are expected for large steps; this is a
// diagnostic, not an invariant.
GronwallReport gronwall_diagnostic(std::span<const KernelTracePoint> trace, double eta);

// Full-batch gradient-descent run on a scalar dataset that records
// (loss, lambda_min) at every epoch; feeds gronwall_diagnostic.
std::vector<KernelTracePoint> kernel_trace_run(ShallowZeNN net, const Dataset& data, double eta,
                                               long epochs);

void write_gram_csv(const KernelMatrix& k, const std::string& path);
void write_gronwall_csv(const GronwallReport& report, const std::string& path);

}  // namespace zenn
