#include "zenn/layer.hpp"

#include <cmath>
#include <numbers>

#include "zenn/rng.hpp"

namespace zenn {

namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw DimensionMismatch(msg);
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseLayer

DenseLayer DenseLayer::make(int in, int out, double alpha, Activation act) {
  if (in <= 0 || out <= 0) throw std::invalid_argument("DenseLayer: dims must be positive");
  if (alpha < 0.0) throw std::invalid_argument("DenseLayer: alpha must be >= 0");
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.alpha = alpha;
  l.act = act;
  l.w.assign(static_cast<std::size_t>(out) * in, 0.0);
  l.b.assign(static_cast<std::size_t>(out), 0.0);
  l.decay.resize(static_cast<std::size_t>(out));
  for (int j = 1; j <= out; ++j)
    l.decay[static_cast<std::size_t>(j - 1)] = alpha == 0.0 ? 1.0 : std::pow(j, -alpha);
  return l;
}

void DenseLayer::forward(std::span<const double> x, std::span<double> y,
                         std::span<double> ws) const {
  check(static_cast<int>(x.size()) == in, "dense forward: input dim");
  check(static_cast<int>(y.size()) == out, "dense forward: output dim");
  check(static_cast<int>(ws.size()) == out, "dense forward: scratch dim");
  for (int j = 0; j < out; ++j) {
    const double* row = w.data() + static_cast<std::size_t>(j) * in;
    double z = b[static_cast<std::size_t>(j)];
    for (int i = 0; i < in; ++i) z += row[i] * x[static_cast<std::size_t>(i)];
    ws[static_cast<std::size_t>(j)] = z;
    y[static_cast<std::size_t>(j)] = decay[static_cast<std::size_t>(j)] * act_value(act, z);
  }
}

void DenseLayer::backward(std::span<const double> x, std::span<const double> ws,
                          std::span<const double> up, std::span<double> pgrad,
                          std::span<double> xgrad) const {
  check(static_cast<int>(up.size()) == out, "dense backward: upstream dim");
  check(static_cast<int>(pgrad.size()) == param_count(), "dense backward: pgrad dim");
  check(static_cast<int>(xgrad.size()) == in, "dense backward: xgrad dim");
  double* wg = pgrad.data();
  double* bg = pgrad.data() + static_cast<std::size_t>(out) * in;
  for (int i = 0; i < in; ++i) xgrad[static_cast<std::size_t>(i)] = 0.0;
  for (int j = 0; j < out; ++j) {
    double delta = up[static_cast<std::size_t>(j)] * decay[static_cast<std::size_t>(j)] *
                   act_deriv(act, ws[static_cast<std::size_t>(j)]);
    const double* row = w.data() + static_cast<std::size_t>(j) * in;
    double* wrow = wg + static_cast<std::size_t>(j) * in;
    for (int i = 0; i < in; ++i) {
      wrow[i] += delta * x[static_cast<std::size_t>(i)];
      xgrad[static_cast<std::size_t>(i)] += delta * row[i];
    }
    bg[j] += delta;
  }
}

// ---------------------------------------------------------------------------
// OZeNNLayer

OZeNNLayer OZeNNLayer::make(int d, int n, double alpha, Activation act) {
  if (d <= 0 || n <= 0) throw std::invalid_argument("OZeNNLayer: dims must be positive");
  if (alpha < 0.0) throw std::invalid_argument("OZeNNLayer: alpha must be >= 0");
  double entries = std::pow(static_cast<double>(n), d);
  if (entries > (1 << 26)) throw std::invalid_argument("OZeNNLayer: lattice too large");
  OZeNNLayer l;
  l.d = d;
  l.n = n;
  l.alpha = alpha;
  l.act = act;
  l.w.assign(static_cast<std::size_t>(d) * n, 0.0);
  l.b.assign(static_cast<std::size_t>(d) * n, 0.0);
  std::size_t total = static_cast<std::size_t>(entries + 0.5);
  l.decay.resize(total);
  std::vector<int> j(static_cast<std::size_t>(d), 1);
  for (std::size_t e = 0; e < total; ++e) {
    double prod = 1.0;
    for (int i = 0; i < d; ++i) prod *= static_cast<double>(j[static_cast<std::size_t>(i)]);
    l.decay[e] = alpha == 0.0 ? 1.0 : std::pow(prod, -alpha);
    // advance the multi-index, last coordinate fastest
    for (int i = d - 1; i >= 0; --i) {
      if (++j[static_cast<std::size_t>(i)] <= n) break;
      j[static_cast<std::size_t>(i)] = 1;
    }
  }
  return l;
}

int OZeNNLayer::output_dim() const {
  int total = 1;
  for (int i = 0; i < d; ++i) total *= n;
  return total;
}

void OZeNNLayer::forward(std::span<const double> x, std::span<double> y,
                         std::span<double> ws) const {
  check(static_cast<int>(x.size()) == d, "ozenn forward: input dim");
  const int total = output_dim();
  check(static_cast<int>(y.size()) == total, "ozenn forward: output dim");
  check(static_cast<int>(ws.size()) == total, "ozenn forward: scratch dim");
  // Per-dimension contribution of lattice coordinate j: w[i,j]*j*x_i + b[i,j].
  std::vector<double> c(static_cast<std::size_t>(d) * n);
  for (int i = 0; i < d; ++i)
    for (int j = 1; j <= n; ++j)
      c[static_cast<std::size_t>(i) * n + (j - 1)] =
          w[static_cast<std::size_t>(i) * n + (j - 1)] * j * x[static_cast<std::size_t>(i)] +
          b[static_cast<std::size_t>(i) * n + (j - 1)];
  std::vector<int> j(static_cast<std::size_t>(d), 0);  // zero-based lattice index
  for (int e = 0; e < total; ++e) {
    double z = 0.0;
    for (int i = 0; i < d; ++i) z += c[static_cast<std::size_t>(i) * n + j[static_cast<std::size_t>(i)]];
    ws[static_cast<std::size_t>(e)] = z;
    y[static_cast<std::size_t>(e)] = decay[static_cast<std::size_t>(e)] * act_value(act, z);
    for (int i = d - 1; i >= 0; --i) {
      if (++j[static_cast<std::size_t>(i)] < n) break;
      j[static_cast<std::size_t>(i)] = 0;
    }
  }
}

void OZeNNLayer::backward(std::span<const double> x, std::span<const double> ws,
                          std::span<const double> up, std::span<double> pgrad,
                          std::span<double> xgrad) const {
  const int total = output_dim();
  check(static_cast<int>(up.size()) == total, "ozenn backward: upstream dim");
  check(static_cast<int>(pgrad.size()) == param_count(), "ozenn backward: pgrad dim");
  check(static_cast<int>(xgrad.size()) == d, "ozenn backward: xgrad dim");
  double* wg = pgrad.data();
  double* bg = pgrad.data() + static_cast<std::size_t>(d) * n;
  for (int i = 0; i < d; ++i) xgrad[static_cast<std::size_t>(i)] = 0.0;
  std::vector<int> j(static_cast<std::size_t>(d), 0);
  for (int e = 0; e < total; ++e) {
    double delta = up[static_cast<std::size_t>(e)] * decay[static_cast<std::size_t>(e)] *
                   act_deriv(act, ws[static_cast<std::size_t>(e)]);
    if (delta != 0.0) {
      for (int i = 0; i < d; ++i) {
        int ji = j[static_cast<std::size_t>(i)];  // zero-based; lattice value ji+1
        std::size_t k = static_cast<std::size_t>(i) * n + ji;
        wg[k] += delta * (ji + 1) * x[static_cast<std::size_t>(i)];
        bg[k] += delta;
        xgrad[static_cast<std::size_t>(i)] += delta * w[k] * (ji + 1);
      }
    }
    for (int i = d - 1; i >= 0; --i) {
      if (++j[static_cast<std::size_t>(i)] < n) break;
      j[static_cast<std::size_t>(i)] = 0;
    }
  }
}

// ---------------------------------------------------------------------------
// RadZeNNLayer

RadZeNNLayer RadZeNNLayer::make(int d, int n, double alpha, Activation act) {
  if (d <= 0 || n <= 0) throw std::invalid_argument("RadZeNNLayer: dims must be positive");
  if (alpha < 0.0) throw std::invalid_argument("RadZeNNLayer: alpha must be >= 0");
  RadZeNNLayer l;
  l.d = d;
  l.n = n;
  l.alpha = alpha;
  l.act = act;
  l.w.assign(static_cast<std::size_t>(d) * n, 0.0);
  l.b.assign(static_cast<std::size_t>(n), 0.0);
  l.decay.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j)
    l.decay[static_cast<std::size_t>(j - 1)] = alpha == 0.0 ? 1.0 : std::pow(j, -alpha);
  return l;
}

void RadZeNNLayer::forward(std::span<const double> x, std::span<double> y,
                           std::span<double> ws) const {
  check(static_cast<int>(x.size()) == d, "radzenn forward: input dim");
  check(static_cast<int>(y.size()) == n, "radzenn forward: output dim");
  check(static_cast<int>(ws.size()) == n, "radzenn forward: scratch dim");
  for (int j = 1; j <= n; ++j) {
    double z = b[static_cast<std::size_t>(j - 1)];
    for (int i = 0; i < d; ++i)
      z += w[static_cast<std::size_t>(i) * n + (j - 1)] * j * x[static_cast<std::size_t>(i)];
    ws[static_cast<std::size_t>(j - 1)] = z;
    y[static_cast<std::size_t>(j - 1)] = decay[static_cast<std::size_t>(j - 1)] * act_value(act, z);
  }
}

void RadZeNNLayer::backward(std::span<const double> x, std::span<const double> ws,
                            std::span<const double> up, std::span<double> pgrad,
                            std::span<double> xgrad) const {
  check(static_cast<int>(up.size()) == n, "radzenn backward: upstream dim");
  check(static_cast<int>(pgrad.size()) == param_count(), "radzenn backward: pgrad dim");
  check(static_cast<int>(xgrad.size()) == d, "radzenn backward: xgrad dim");
  double* wg = pgrad.data();
  double* bg = pgrad.data() + static_cast<std::size_t>(d) * n;
  for (int i = 0; i < d; ++i) xgrad[static_cast<std::size_t>(i)] = 0.0;
  for (int j = 1; j <= n; ++j) {
    double delta = up[static_cast<std::size_t>(j - 1)] * decay[static_cast<std::size_t>(j - 1)] *
                   act_deriv(act, ws[static_cast<std::size_t>(j - 1)]);
    for (int i = 0; i < d; ++i) {
      std::size_t k = static_cast<std::size_t>(i) * n + (j - 1);
      wg[k] += delta * j * x[static_cast<std::size_t>(i)];
      xgrad[static_cast<std::size_t>(i)] += delta * w[k] * j;
    }
    bg[j - 1] += delta;
  }
}

// ---------------------------------------------------------------------------
// RandoZeNNLayer

RandoZeNNLayer RandoZeNNLayer::make(int d, int n, int m, double alpha, Activation act,
                                    std::uint64_t seed) {
  if (d <= 0 || n <= 0 || m <= 0) throw std::invalid_argument("RandoZeNNLayer: dims must be positive");
  if (alpha < 0.0) throw std::invalid_argument("RandoZeNNLayer: alpha must be >= 0");
  RandoZeNNLayer l;
  l.d = d;
  l.n = n;
  l.m = m;
  l.alpha = alpha;
  l.act = act;
  l.idx.resize(static_cast<std::size_t>(m) * d);
  Rng rng(seed);
  for (int r = 0; r < m; ++r)
    for (int i = 0; i < d; ++i)
      l.idx[static_cast<std::size_t>(r) * d + i] = static_cast<std::int32_t>(rng.uniform_int(1, n));
  l.w.assign(static_cast<std::size_t>(d) * m, 0.0);
  l.b.assign(static_cast<std::size_t>(m), 0.0);
  l.refresh_decay();
  return l;
}

void RandoZeNNLayer::refresh_decay() {
  decay.resize(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    double prod = 1.0;
    for (int i = 0; i < d; ++i) prod *= static_cast<double>(idx[static_cast<std::size_t>(r) * d + i]);
    decay[static_cast<std::size_t>(r)] = alpha == 0.0 ? 1.0 : std::pow(prod, -alpha);
  }
}

void RandoZeNNLayer::forward(std::span<const double> x, std::span<double> y,
                             std::span<double> ws) const {
  check(static_cast<int>(x.size()) == d, "randozenn forward: input dim");
  check(static_cast<int>(y.size()) == m, "randozenn forward: output dim");
  check(static_cast<int>(ws.size()) == m, "randozenn forward: scratch dim");
  for (int r = 0; r < m; ++r) {
    double z = b[static_cast<std::size_t>(r)];
    for (int i = 0; i < d; ++i)
      z += static_cast<double>(idx[static_cast<std::size_t>(r) * d + i]) *
           x[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i) * m + r];
    ws[static_cast<std::size_t>(r)] = z;
    y[static_cast<std::size_t>(r)] = decay[static_cast<std::size_t>(r)] * act_value(act, z);
  }
}

void RandoZeNNLayer::backward(std::span<const double> x, std::span<const double> ws,
                              std::span<const double> up, std::span<double> pgrad,
                              std::span<double> xgrad) const {
  check(static_cast<int>(up.size()) == m, "randozenn backward: upstream dim");
  check(static_cast<int>(pgrad.size()) == param_count(), "randozenn backward: pgrad dim");
  check(static_cast<int>(xgrad.size()) == d, "randozenn backward: xgrad dim");
  double* wg = pgrad.data();
  double* bg = pgrad.data() + static_cast<std::size_t>(d) * m;
  for (int i = 0; i < d; ++i) xgrad[static_cast<std::size_t>(i)] = 0.0;
  for (int r = 0; r < m; ++r) {
    double delta = up[static_cast<std::size_t>(r)] * decay[static_cast<std::size_t>(r)] *
                   act_deriv(act, ws[static_cast<std::size_t>(r)]);
    for (int i = 0; i < d; ++i) {
      double ji = static_cast<double>(idx[static_cast<std::size_t>(r) * d + i]);
      wg[static_cast<std::size_t>(i) * m + r] += delta * ji * x[static_cast<std::size_t>(i)];
      xgrad[static_cast<std::size_t>(i)] += delta * ji * w[static_cast<std::size_t>(i) * m + r];
    }
    bg[r] += delta;
  }
}

// ---------------------------------------------------------------------------
// FourierLayer

FourierLayer FourierLayer::make(int d, int n, double rho, bool trainable, std::uint64_t seed) {
  if (d <= 0 || n <= 0) throw std::invalid_argument("FourierLayer: dims must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("FourierLayer: rho must be > 0");
  FourierLayer l;
  l.d = d;
  l.n = n;
  l.rho = rho;
  l.trainable = trainable;
  l.bmat.resize(static_cast<std::size_t>(n) * d);
  Rng rng(seed);
  for (double& v : l.bmat) v = rng.normal(0.0, rho);
  return l;
}

void FourierLayer::forward(std::span<const double> x, std::span<double> y,
                           std::span<double> ws) const {
  check(static_cast<int>(x.size()) == d, "fourier forward: input dim");
  check(static_cast<int>(y.size()) == 2 * n, "fourier forward: output dim");
  check(static_cast<int>(ws.size()) == n, "fourier forward: scratch dim");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < n; ++j) {
    double z = 0.0;
    for (int i = 0; i < d; ++i)
      z += bmat[static_cast<std::size_t>(j) * d + i] * x[static_cast<std::size_t>(i)];
    z *= two_pi;
    ws[static_cast<std::size_t>(j)] = z;
    y[static_cast<std::size_t>(j)] = std::sin(z);
    y[static_cast<std::size_t>(n + j)] = std::cos(z);
  }
}

void FourierLayer::backward(std::span<const double> x, std::span<const double> ws,
                            std::span<const double> up, std::span<double> pgrad,
                            std::span<double> xgrad) const {
  check(static_cast<int>(up.size()) == 2 * n, "fourier backward: upstream dim");
  check(static_cast<int>(pgrad.size()) == param_count(), "fourier backward: pgrad dim");
  check(static_cast<int>(xgrad.size()) == d, "fourier backward: xgrad dim");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < d; ++i) xgrad[static_cast<std::size_t>(i)] = 0.0;
  for (int j = 0; j < n; ++j) {
    double z = ws[static_cast<std::size_t>(j)];
    double dz = up[static_cast<std::size_t>(j)] * std::cos(z) -
                up[static_cast<std::size_t>(n + j)] * std::sin(z);
    for (int i = 0; i < d; ++i) {
      if (trainable)
        pgrad[static_cast<std::size_t>(j) * d + i] += dz * two_pi * x[static_cast<std::size_t>(i)];
      xgrad[static_cast<std::size_t>(i)] += dz * two_pi * bmat[static_cast<std::size_t>(j) * d + i];
    }
  }
}

// ---------------------------------------------------------------------------
// KAZeNNLayer

KAZeNNLayer KAZeNNLayer::make(int in, int out, int edge_n, double edge_alpha, Activation act) {
  if (in <= 0 || out <= 0) throw std::invalid_argument("KAZeNNLayer: dims must be positive");
  KAZeNNLayer l;
  l.in = in;
  l.out = out;
  l.edges.reserve(static_cast<std::size_t>(in) * out);
  for (int q = 0; q < out; ++q)
    for (int p = 0; p < in; ++p) l.edges.push_back(ShallowZeNN::make(edge_n, edge_alpha, act));
  return l;
}

int KAZeNNLayer::param_count() const {
  int total = 0;
  for (const ShallowZeNN& e : edges) total += 4 * e.n;
  return total;
}

void KAZeNNLayer::forward(std::span<const double> x, std::span<double> y,
                          std::span<double> /*ws*/) const {
  check(static_cast<int>(x.size()) == in, "kazenn forward: input dim");
  check(static_cast<int>(y.size()) == out, "kazenn forward: output dim");
  for (int q = 0; q < out; ++q) {
    double sum = 0.0;
    for (int p = 0; p < in; ++p) sum += zenn_forward(edge(q, p), x[static_cast<std::size_t>(p)]);
    y[static_cast<std::size_t>(q)] = sum;
  }
}

void KAZeNNLayer::backward(std::span<const double> x, std::span<const double> /*ws*/,
                           std::span<const double> up, std::span<double> pgrad,
                           std::span<double> xgrad) const {
  check(static_cast<int>(up.size()) == out, "kazenn backward: upstream dim");
  check(static_cast<int>(pgrad.size()) == param_count(), "kazenn backward: pgrad dim");
  check(static_cast<int>(xgrad.size()) == in, "kazenn backward: xgrad dim");
  for (int p = 0; p < in; ++p) xgrad[static_cast<std::size_t>(p)] = 0.0;
  std::size_t off = 0;
  std::vector<double> g;
  for (int q = 0; q < out; ++q) {
    for (int p = 0; p < in; ++p) {
      const ShallowZeNN& e = edge(q, p);
      std::size_t np = static_cast<std::size_t>(4) * e.n;
      g.resize(np);
      double xp = x[static_cast<std::size_t>(p)];
      zenn_backward(e, xp, g);
      double u = up[static_cast<std::size_t>(q)];
      for (std::size_t k = 0; k < np; ++k) pgrad[off + k] += u * g[k];
      xgrad[static_cast<std::size_t>(p)] += u * zenn_input_derivative(e, xp);
      off += np;
    }
  }
}

// ---------------------------------------------------------------------------
// ConcatLayer

ConcatLayer ConcatLayer::make(std::vector<Layer> parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatLayer: needs at least one part");
  int d = parts.front().input_dim();
  for (const Layer& p : parts)
    if (p.input_dim() != d) throw std::invalid_argument("ConcatLayer: parts disagree on input dim");
  ConcatLayer l;
  l.parts = std::move(parts);
  return l;
}

int ConcatLayer::input_dim() const { return parts.front().input_dim(); }

int ConcatLayer::output_dim() const {
  int total = 0;
  for (const Layer& p : parts) total += p.output_dim();
  return total;
}

int ConcatLayer::param_count() const {
  int total = 0;
  for (const Layer& p : parts) total += p.param_count();
  return total;
}

int ConcatLayer::ws_size() const {
  int total = 0;
  for (const Layer& p : parts) total += p.ws_size();
  return total;
}

void ConcatLayer::forward(std::span<const double> x, std::span<double> y,
                          std::span<double> ws) const {
  check(static_cast<int>(y.size()) == output_dim(), "concat forward: output dim");
  check(static_cast<int>(ws.size()) == ws_size(), "concat forward: scratch dim");
  std::size_t yo = 0, wo = 0;
  for (const Layer& p : parts) {
    p.forward(x, y.subspan(yo, static_cast<std::size_t>(p.output_dim())),
              ws.subspan(wo, static_cast<std::size_t>(p.ws_size())));
    yo += static_cast<std::size_t>(p.output_dim());
    wo += static_cast<std::size_t>(p.ws_size());
  }
}

void ConcatLayer::backward(std::span<const double> x, std::span<const double> ws,
                           std::span<const double> up, std::span<double> pgrad,
                           std::span<double> xgrad) const {
  check(static_cast<int>(up.size()) == output_dim(), "concat backward: upstream dim");
  check(static_cast<int>(pgrad.size()) == param_count(), "concat backward: pgrad dim");
  check(static_cast<int>(xgrad.size()) == input_dim(), "concat backward: xgrad dim");
  for (std::size_t i = 0; i < xgrad.size(); ++i) xgrad[i] = 0.0;
  std::vector<double> xg(xgrad.size());
  std::size_t yo = 0, wo = 0, po = 0;
  for (const Layer& p : parts) {
    p.backward(x, ws.subspan(wo, static_cast<std::size_t>(p.ws_size())),
               up.subspan(yo, static_cast<std::size_t>(p.output_dim())),
               pgrad.subspan(po, static_cast<std::size_t>(p.param_count())), xg);
    for (std::size_t i = 0; i < xgrad.size(); ++i) xgrad[i] += xg[i];
    yo += static_cast<std::size_t>(p.output_dim());
    wo += static_cast<std::size_t>(p.ws_size());
    po += static_cast<std::size_t>(p.param_count());
  }
}

// ---------------------------------------------------------------------------
// Layer dispatch

int Layer::input_dim() const {
  return std::visit([](const auto& l) { return l.input_dim(); }, v);
}
int Layer::output_dim() const {
  return std::visit([](const auto& l) { return l.output_dim(); }, v);
}
int Layer::param_count() const {
  return std::visit([](const auto& l) { return l.param_count(); }, v);
}
int Layer::ws_size() const {
  return std::visit([](const auto& l) { return l.ws_size(); }, v);
}

void Layer::forward(std::span<const double> x, std::span<double> y, std::span<double> ws) const {
  std::visit([&](const auto& l) { l.forward(x, y, ws); }, v);
}

void Layer::backward(std::span<const double> x, std::span<const double> ws,
                     std::span<const double> up, std::span<double> pgrad,
                     std::span<double> xgrad) const {
  std::visit([&](const auto& l) { l.backward(x, ws, up, pgrad, xgrad); }, v);
}

namespace {

// Flat parameter layout per layer: weights first, then biases. Fourier
// layers expose the frequency matrix only when trainable. KAZeNN layers
// chain their edges row-major (q major), each edge in the shallow layout.
template <typename F>
void visit_param_blocks(const Layer& layer, F&& f) {
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, DenseLayer> || std::is_same_v<T, OZeNNLayer> ||
                      std::is_same_v<T, RadZeNNLayer> || std::is_same_v<T, RandoZeNNLayer>) {
          f(l.w);
          f(l.b);
        } else if constexpr (std::is_same_v<T, FourierLayer>) {
          if (l.trainable) f(l.bmat);
        } else {
          (void)l;  // KAZeNN and Concat handled by the callers below
        }
      },
      layer.v);
}

}  // namespace

void Layer::get_params(std::span<double> out) const {
  if (static_cast<int>(out.size()) != param_count())
    throw DimensionMismatch("Layer::get_params: size mismatch");
  if (const auto* ka = std::get_if<KAZeNNLayer>(&v)) {
    std::size_t off = 0;
    for (const ShallowZeNN& e : ka->edges) {
      std::size_t np = static_cast<std::size_t>(4) * e.n;
      zenn::get_params(e, out.subspan(off, np));
      off += np;
    }
    return;
  }
  if (const auto* cc = std::get_if<ConcatLayer>(&v)) {
    std::size_t off = 0;
    for (const Layer& p : cc->parts) {
      std::size_t np = static_cast<std::size_t>(p.param_count());
      p.get_params(out.subspan(off, np));
      off += np;
    }
    return;
  }
  std::size_t off = 0;
  visit_param_blocks(*this, [&](const std::vector<double>& block) {
    for (double x : block) out[off++] = x;
  });
}

void Layer::set_params(std::span<const double> in) {
  if (static_cast<int>(in.size()) != param_count())
    throw DimensionMismatch("Layer::set_params: size mismatch");
  if (auto* ka = std::get_if<KAZeNNLayer>(&v)) {
    std::size_t off = 0;
    for (ShallowZeNN& e : ka->edges) {
      std::size_t np = static_cast<std::size_t>(4) * e.n;
      zenn::set_params(e, in.subspan(off, np));
      off += np;
    }
    return;
  }
  if (auto* cc = std::get_if<ConcatLayer>(&v)) {
    std::size_t off = 0;
    for (Layer& p : cc->parts) {
      std::size_t np = static_cast<std::size_t>(p.param_count());
      p.set_params(in.subspan(off, np));
      off += np;
    }
    return;
  }
  std::size_t off = 0;
  std::visit(
      [&](auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, DenseLayer> || std::is_same_v<T, OZeNNLayer> ||
                      std::is_same_v<T, RadZeNNLayer> || std::is_same_v<T, RandoZeNNLayer>) {
          for (double& x : l.w) x = in[off++];
          for (double& x : l.b) x = in[off++];
        } else if constexpr (std::is_same_v<T, FourierLayer>) {
          if (l.trainable)
            for (double& x : l.bmat) x = in[off++];
        }
      },
      v);
}

void Layer::axpy_params(double c, std::span<const double> vg) {
  if (static_cast<int>(vg.size()) != param_count())
    throw DimensionMismatch("Layer::axpy_params: size mismatch");
  std::vector<double> p(vg.size());
  get_params(p);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] += c * vg[i];
  set_params(p);
}

std::vector<double> layer_forward(const Layer& layer, std::span<const double> x) {
  if (static_cast<int>(x.size()) != layer.input_dim())
    throw DimensionMismatch("layer_forward: input dim mismatch");
  std::vector<double> y(static_cast<std::size_t>(layer.output_dim()));
  std::vector<double> ws(static_cast<std::size_t>(layer.ws_size()));
  layer.forward(x, y, ws);
  return y;
}

LayerGradients layer_backward(const Layer& layer, std::span<const double> x,
                              std::span<const double> upstream) {
  if (static_cast<int>(x.size()) != layer.input_dim())
    throw DimensionMismatch("layer_backward: input dim mismatch");
  if (static_cast<int>(upstream.size()) != layer.output_dim())
    throw DimensionMismatch("layer_backward: upstream dim mismatch");
  std::vector<double> y(static_cast<std::size_t>(layer.output_dim()));
  std::vector<double> ws(static_cast<std::size_t>(layer.ws_size()));
  layer.forward(x, y, ws);
  LayerGradients g;
  g.param_grad.assign(static_cast<std::size_t>(layer.param_count()), 0.0);
  g.input_grad.assign(static_cast<std::size_t>(layer.input_dim()), 0.0);
  layer.backward(x, ws, upstream, g.param_grad, g.input_grad);
  return g;
}

}  // namespace zenn
