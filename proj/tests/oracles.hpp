#pragma once

// Test-only reference implementations, kept independent of the library
// paths they check: extended-precision direct summation, finite
// differences, and Gauss-Legendre quadrature.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "zenn/rng.hpp"
#include "zenn/shallow.hpp"

namespace oracle {

// Relative error with an absolute floor of 1.
inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double max_rel_err(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, rel_err(a[i], b[i]));
  return worst;
}

// Central finite-difference gradient of a scalar function of a parameter
// vector.
inline std::vector<double> fd_gradient(std::vector<double> p,
                                       const std::function<double(std::span<const double>)>& f,
                                       double h = 1e-5) {
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double keep = p[i];
    p[i] = keep + h;
    double fp = f(p);
    p[i] = keep - h;
    double fm = f(p);
    p[i] = keep;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Second central difference in one coordinate.
inline double fd_second(std::vector<double> p, std::size_t i,
                        const std::function<double(std::span<const double>)>& f, double h = 1e-4) {
  double keep = p[i];
  double f0 = f(p);
  p[i] = keep + h;
  double fp = f(p);
  p[i] = keep - h;
  double fm = f(p);
  return (fp - 2.0 * f0 + fm) / (h * h);
}

// Long-double activation evaluation for the summation oracles.
inline long double act_value_l(zenn::Activation act, long double x) {
  switch (act) {
    case zenn::Activation::sine: return sinl(x);
    case zenn::Activation::cosine: return cosl(x);
    case zenn::Activation::relu: return x > 0.0L ? x : 0.0L;
    case zenn::Activation::sigmoid: return 1.0L / (1.0L + expl(-x));
    case zenn::Activation::identity: return x;
  }
  return 0.0L;
}

// Direct extended-precision summation of the shallow network values.
inline double zenn_forward_ref(const zenn::ShallowZeNN& net, double x) {
  long double sum = 0.0L;
  for (int j = 1; j <= net.n; ++j) {
    const zenn::NeuronParams& p = net.neurons[static_cast<std::size_t>(j - 1)];
    long double u = static_cast<long double>(p.w1) * j * x + p.b1;
    sum += powl(static_cast<long double>(j), static_cast<long double>(-net.alpha)) *
           (static_cast<long double>(p.w2) * act_value_l(net.act, u) + p.b2);
  }
  return static_cast<double>(sum);
}

inline double mlp_forward_ref(const zenn::ShallowMLP& net, double x) {
  long double sum = 0.0L;
  for (const zenn::NeuronParams& p : net.neurons) {
    long double u = static_cast<long double>(p.w1) * x + p.b1;
    sum += static_cast<long double>(p.w2) * act_value_l(net.act, u) + p.b2;
  }
  return static_cast<double>(powl(static_cast<long double>(net.n),
                                  static_cast<long double>(-net.beta)) *
                             sum);
}

// --- Gauss-Legendre quadrature --------------------------------------------

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

template <typename F>
auto gl_integrate(const GaussRule& rule, double lo, double hi, F&& f) -> decltype(f(0.0)) {
  using R = decltype(f(0.0));
  R sum{};
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

// E[exp(i s relu(j w x + b))] with w ~ U(-L, L), b ~ U(-B, B), computed by
// quadrature with the integrand split at its kinks.
inline std::complex<double> charfn_factor_quad(int j, double x, double s, double L, double B) {
  static const GaussRule rule = gauss_legendre(48);
  const std::complex<double> iunit(0.0, 1.0);
  auto inner = [&](double w) -> std::complex<double> {
    double b0 = -static_cast<double>(j) * w * x;  // relu kink in b
    auto f = [&](double b) { return std::exp(iunit * (s * (j * w * x + b))); };
    std::complex<double> val;
    if (b0 <= -B)
      val = gl_integrate(rule, -B, B, f);
    else if (b0 >= B)
      val = 2.0 * B;
    else
      val = (b0 + B) + gl_integrate(rule, b0, B, f);
    return val / (2.0 * B);
  };
  // The inner integral has kinks in w where b0 crosses +-B.
  double wc = B / (j * x);
  std::vector<double> cuts = {-L};
  for (double c : {-wc, wc})
    if (c > -L && c < L) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(L);
  std::complex<double> total(0.0, 0.0);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    total += gl_integrate(rule, cuts[k], cuts[k + 1], inner);
  return total / (2.0 * L);
}

inline std::complex<double> charfn_quad(double x, double t, double L, double B, double alpha,
                                        int n) {
  std::complex<double> prod(1.0, 0.0);
  for (int j = 1; j <= n; ++j) prod *= charfn_factor_quad(j, x, t / std::pow(j, alpha), L, B);
  return prod;
}

// Random shallow networks for sweep tests.
inline zenn::ShallowZeNN random_zenn(zenn::Rng& rng, int n, double alpha, zenn::Activation act,
                                     double scale = 1.0) {
  zenn::ShallowZeNN net = zenn::ShallowZeNN::make(n, alpha, act);
  for (zenn::NeuronParams& p : net.neurons) {
    p.w1 = rng.normal(0.0, scale);
    p.b1 = rng.normal(0.0, scale);
    p.w2 = rng.normal(0.0, scale);
    p.b2 = rng.normal(0.0, scale);
  }
  return net;
}

inline zenn::ShallowMLP random_mlp(zenn::Rng& rng, int n, double beta, zenn::Activation act,
                                   double scale = 1.0) {
  zenn::ShallowMLP net = zenn::ShallowMLP::make(n, beta, act);
  for (zenn::NeuronParams& p : net.neurons) {
    p.w1 = rng.normal(0.0, scale);
    p.b1 = rng.normal(0.0, scale);
    p.w2 = rng.normal(0.0, scale);
    p.b2 = rng.normal(0.0, scale);
  }
  return net;
}

}  // namespace oracle
