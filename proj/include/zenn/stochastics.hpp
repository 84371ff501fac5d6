#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "zenn/model.hpp"
#include "zenn/rng.hpp"

namespace zenn {

// Per-role initialization distributions. Parameters are drawn in a fixed
// documented order: shallow networks neuron-major as (w1, b1, w2, b2);
// deep models layer by layer, weights before biases. Everything is a
// function of `seed` alone.
struct InitSpec {
  Dist w1 = Dist::normal(0.0, 1.0);
  Dist b1 = Dist::constant(0.0);
  Dist w2 = Dist::normal(0.0, 1.0);
  Dist b2 = Dist::constant(0.0);
  std::uint64_t seed = 0;

  static InitSpec defaults(std::uint64_t seed) {
    InitSpec s;
    s.seed = seed;
    return s;
  }
  void validate() const;
};

void init_model(ShallowZeNN& net, const InitSpec& spec);
void init_model(ShallowMLP& net, const InitSpec& spec);
void init_model(DeepModel& model, const InitSpec& spec);
void init_model(Model& model, const InitSpec& spec);

// Fills one layer's weights/biases from the given distributions; Fourier
// frequency matrices keep their construction-time sample.
void init_layer(Layer& layer, const Dist& w, const Dist& b, Rng& rng);

// ---------------------------------------------------------------------------
// Cumulant estimation

// Unbiased k-statistics k1..k4 of an i.i.d. sample, with standard errors
// from splitting the sample into ~sqrt(n) batches. Orders above
// max_order are left at zero.
struct KStats {
  int max_order = 4;
  long n = 0;
  std::array<double, 5> k{};   // k[r] for r = 1..max_order
  std::array<double, 5> se{};  // matching standard errors (0 when n is tiny)
};
KStats k_statistics(std::span<const double> sample, int max_order = 4);

struct BatchedStat {
  double value = 0.0;
  double stderr_ = 0.0;
};
// Single k-statistic of order r with batch standard error.
BatchedStat k_stat_batched(std::span<const double> sample, int r);
// k4 / k2^2 with batch standard error.
BatchedStat excess_kurtosis_batched(std::span<const double> sample);

// ---------------------------------------------------------------------------
// Monte-Carlo sampling of network values at a fixed input

struct ShallowZeNNArch {
  int n = 1;
  double alpha = 1.0;
  Activation act = Activation::sine;
};
struct ShallowMLPArch {
  int n = 1;
  double beta = 0.5;
  Activation act = Activation::sine;
};

// Values of a single perceptron w2*act(w1*point + b1) + b2 under `spec`.
// Sampling is chunked with per-chunk derived seeds, so results are
// deterministic and independent of any future parallel split.
std::vector<double> sample_perceptron_values(const InitSpec& spec, Activation act, double point,
                                             long samples);
std::vector<double> sample_zenn_values(const ShallowZeNNArch& arch, const InitSpec& spec, double x,
                                       long samples);
std::vector<double> sample_mlp_values(const ShallowMLPArch& arch, const InitSpec& spec, double x,
                                      long samples);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};

// Order-r cumulant of the single-perceptron output at `point`.
McEstimate perceptron_cumulant_mc(const InitSpec& spec, Activation act, double point, int r,
                                  long samples);

// Order-r cumulant of the width-n network value at x.
McEstimate zenn_width_cumulant_mc(const ShallowZeNNArch& arch, const InitSpec& spec, double x,
                                  int r, long samples);
McEstimate mlp_width_cumulant_mc(const ShallowMLPArch& arch, const InitSpec& spec, double x, int r,
                                 long samples);

// ---------------------------------------------------------------------------
// Cumulant series

// Partial sum sum_{j=1..n} lambda_r(j*x) / j^(r*alpha) of the network
// cumulant in terms of the perceptron cumulant function lambda_r. With
// n < 0 the sum runs until the term bound
// (1+|j x|)^(r*k) / j^(r*(alpha-k)) drops below 1e-12, where k is the
// polynomial growth order of the activation (0 for bounded ones);
// r*(alpha-k) > 1 is required in that case.
double zenn_cumulant_series(const std::function<double(double)>& lambda_r, int r, double alpha,
                            double x, long n, int growth_order = 0);

// Same series with lambda_r estimated by Monte Carlo at each j (seed
// stream derived per term), propagating the standard errors.
struct SeriesMc {
  double value = 0.0;
  double stderr_ = 0.0;
};
SeriesMc zenn_cumulant_series_mc(const InitSpec& spec, Activation act, int r, double alpha,
                                 double x, int n, long samples_per_term);

// Width scaling of a zero-mean perceptron-average network:
// lambda_r / n^(r/2 - 1).
double mlp_cumulant_scaling(double lambda_r, int r, long n);

// Row of a cumulant comparison report.
struct CumulantReport {
  int r = 2;
  long n = 1;
  double alpha = 1.0;
  double x = 0.0;
  double analytic = 0.0;
  double mc = 0.0;
  double mc_stderr = 0.0;
  long samples = 0;
};

// ---------------------------------------------------------------------------
// Characteristic functions

// Closed-form characteristic function at frequency t of
// sum_{j=1..n} act_relu(j*W_j*x + b_j) / j^alpha with W ~ U(-L, L) and
// b ~ U(-B, B) i.i.d.; valid for x > 0. Each factor picks its branch by
// comparing j*L*x with B; at the boundary both branches agree.
std::complex<double> charfn_relu_uniform(double x, double t, double L, double B, double alpha,
                                         int n);

struct McComplex {
  std::complex<double> value;
  double stderr_ = 0.0;
  long samples = 0;
};

// Monte-Carlo average of exp(i t f(x)) over parameter draws of a shallow
// ZeNN family.
McComplex charfn_mc(const ShallowZeNNArch& arch, const InitSpec& spec, double x, double t,
                    long samples);

// ---------------------------------------------------------------------------
// Width-doubling convergence experiment

enum class ArchFamily { zenn, mlp };

// Sup over `grid` of |f^(2N) - f^(N)| for each N in `widths`, where the
// width-2N network extends the width-N one (one nested parameter draw
// from spec.seed). `exponent` is alpha for the zenn family and beta for
// the mlp family. Returns the decay sequence and the least-squares slope
// of log2 sup_diff against log2 N.
struct TailReport {
  std::vector<long> widths;
  std::vector<double> sup_diff;
  std::vector<double> log2_sup_diff;
  double slope = 0.0;
};
TailReport convergence_tail(ArchFamily family, double exponent, Activation act,
                            std::span<const long> widths, std::span<const double> grid,
                            const InitSpec& spec);

}  // namespace zenn
