#include "zenn/stochastics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zenn {

void InitSpec::validate() const {
  w1.validate();
  b1.validate();
  w2.validate();
  b2.validate();
}

namespace {

constexpr long kChunk = 1 << 16;  // samples per derived seed stream

template <typename Net>
void init_shallow(Net& net, const InitSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  for (NeuronParams& p : net.neurons) {
    p.w1 = spec.w1.sample(rng);
    p.b1 = spec.b1.sample(rng);
    p.w2 = spec.w2.sample(rng);
    p.b2 = spec.b2.sample(rng);
  }
}

}  // namespace

void init_model(ShallowZeNN& net, const InitSpec& spec) { init_shallow(net, spec); }
void init_model(ShallowMLP& net, const InitSpec& spec) { init_shallow(net, spec); }

void init_layer(Layer& layer, const Dist& w, const Dist& b, Rng& rng) {
  std::visit(
      [&](auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, DenseLayer> || std::is_same_v<T, OZeNNLayer> ||
                      std::is_same_v<T, RadZeNNLayer> || std::is_same_v<T, RandoZeNNLayer>) {
          for (double& v : l.w) v = w.sample(rng);
          for (double& v : l.b) v = b.sample(rng);
        } else if constexpr (std::is_same_v<T, KAZeNNLayer>) {
          for (ShallowZeNN& e : l.edges) {
            for (NeuronParams& p : e.neurons) {
              p.w1 = w.sample(rng);
              p.b1 = b.sample(rng);
              p.w2 = w.sample(rng);
              p.b2 = b.sample(rng);
            }
          }
        } else if constexpr (std::is_same_v<T, ConcatLayer>) {
          for (Layer& part : l.parts) init_layer(part, w, b, rng);
        }
        // Fourier layers keep their construction-time frequency sample.
      },
      layer.v);
}

void init_model(DeepModel& model, const InitSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  for (Layer& l : model.layers) init_layer(l, spec.w1, spec.b1, rng);
}

void init_model(Model& model, const InitSpec& spec) {
  std::visit([&](auto& net) { init_model(net, spec); }, model);
}

// ---------------------------------------------------------------------------
// k-statistics

namespace {

// k-statistics from the centered power sums of one contiguous block.
void kstats_block(std::span<const double> s, int max_order, double* out) {
  const double n = static_cast<double>(s.size());
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= n;
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double v : s) {
    double d = v - mean;
    double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  out[1] = mean;
  if (max_order >= 2) out[2] = s2 / (n - 1.0);
  if (max_order >= 3) out[3] = n * s3 / ((n - 1.0) * (n - 2.0));
  if (max_order >= 4)
    out[4] = (n * (n + 1.0) * s4 - 3.0 * (n - 1.0) * s2 * s2) /
             ((n - 1.0) * (n - 2.0) * (n - 3.0));
}

// Batch layout shared by all batched estimators: ~sqrt(n) equal batches,
// remainder samples ignored for the error estimate only.
struct Batches {
  long count = 0;
  long size = 0;
};

Batches batch_layout(long n, int min_batch) {
  Batches b;
  b.count = static_cast<long>(std::floor(std::sqrt(static_cast<double>(n))));
  if (b.count < 2) return b;
  b.size = n / b.count;
  if (b.size < min_batch) {
    b.count = n / min_batch;
    b.size = b.count >= 2 ? min_batch : 0;
  }
  return b;
}

double batch_stderr(std::span<const double> batch_values) {
  const double m = static_cast<double>(batch_values.size());
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= m;
  double var = 0.0;
  for (double v : batch_values) var += (v - mean) * (v - mean);
  var /= (m - 1.0);
  return std::sqrt(var / m);
}

}  // namespace

KStats k_statistics(std::span<const double> sample, int max_order) {
  if (max_order < 1 || max_order > 4)
    throw std::invalid_argument("k_statistics: order must be in 1..4");
  const long n = static_cast<long>(sample.size());
  if (n < max_order + 1) throw std::invalid_argument("k_statistics: sample too short");
  KStats ks;
  ks.max_order = max_order;
  ks.n = n;
  double full[5] = {};
  kstats_block(sample, max_order, full);
  for (int r = 1; r <= max_order; ++r) ks.k[static_cast<std::size_t>(r)] = full[r];

  Batches b = batch_layout(n, max_order + 1);
  if (b.count >= 2) {
    std::vector<double> est(static_cast<std::size_t>(b.count));
    for (int r = 1; r <= max_order; ++r) {
      for (long c = 0; c < b.count; ++c) {
        double block[5] = {};
        kstats_block(sample.subspan(static_cast<std::size_t>(c * b.size),
                                    static_cast<std::size_t>(b.size)),
                     max_order, block);
        est[static_cast<std::size_t>(c)] = block[r];
      }
      ks.se[static_cast<std::size_t>(r)] = batch_stderr(est);
    }
  }
  return ks;
}

BatchedStat k_stat_batched(std::span<const double> sample, int r) {
  KStats ks = k_statistics(sample, r);
  return {ks.k[static_cast<std::size_t>(r)], ks.se[static_cast<std::size_t>(r)]};
}

BatchedStat excess_kurtosis_batched(std::span<const double> sample) {
  const long n = static_cast<long>(sample.size());
  if (n < 5) throw std::invalid_argument("excess_kurtosis_batched: sample too short");
  double full[5] = {};
  kstats_block(sample, 4, full);
  BatchedStat out;
  out.value = full[4] / (full[2] * full[2]);
  Batches b = batch_layout(n, 5);
  if (b.count >= 2) {
    std::vector<double> est(static_cast<std::size_t>(b.count));
    for (long c = 0; c < b.count; ++c) {
      double block[5] = {};
      kstats_block(
          sample.subspan(static_cast<std::size_t>(c * b.size), static_cast<std::size_t>(b.size)),
          4, block);
      est[static_cast<std::size_t>(c)] = block[4] / (block[2] * block[2]);
    }
    out.stderr_ = batch_stderr(est);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo value sampling

namespace {

template <typename Draw>
std::vector<double> sample_chunked(std::uint64_t seed, long samples, Draw&& draw) {
  if (samples < 1) throw std::invalid_argument("sampling: need at least one sample");
  std::vector<double> out(static_cast<std::size_t>(samples));
  long done = 0, chunk = 0;
  while (done < samples) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(chunk)));
    long count = std::min(kChunk, samples - done);
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(done + i)] = draw(rng);
    done += count;
    ++chunk;
  }
  return out;
}

}  // namespace

std::vector<double> sample_perceptron_values(const InitSpec& spec, Activation act, double point,
                                             long samples) {
  spec.validate();
  return sample_chunked(spec.seed, samples, [&](Rng& rng) {
    double w1 = spec.w1.sample(rng);
    double b1 = spec.b1.sample(rng);
    double w2 = spec.w2.sample(rng);
    double b2 = spec.b2.sample(rng);
    return w2 * act_value(act, w1 * point + b1) + b2;
  });
}

std::vector<double> sample_zenn_values(const ShallowZeNNArch& arch, const InitSpec& spec, double x,
                                       long samples) {
  spec.validate();
  return sample_chunked(spec.seed, samples, [&](Rng& rng) {
    double sum = 0.0;
    for (int j = 1; j <= arch.n; ++j) {
      double w1 = spec.w1.sample(rng);
      double b1 = spec.b1.sample(rng);
      double w2 = spec.w2.sample(rng);
      double b2 = spec.b2.sample(rng);
      sum += std::pow(j, -arch.alpha) * (w2 * act_value(arch.act, w1 * j * x + b1) + b2);
    }
    return sum;
  });
}

std::vector<double> sample_mlp_values(const ShallowMLPArch& arch, const InitSpec& spec, double x,
                                      long samples) {
  spec.validate();
  const double scale = std::pow(arch.n, -arch.beta);
  return sample_chunked(spec.seed, samples, [&](Rng& rng) {
    double sum = 0.0;
    for (int j = 1; j <= arch.n; ++j) {
      double w1 = spec.w1.sample(rng);
      double b1 = spec.b1.sample(rng);
      double w2 = spec.w2.sample(rng);
      double b2 = spec.b2.sample(rng);
      sum += w2 * act_value(arch.act, w1 * x + b1) + b2;
    }
    return scale * sum;
  });
}

McEstimate perceptron_cumulant_mc(const InitSpec& spec, Activation act, double point, int r,
                                  long samples) {
  std::vector<double> values = sample_perceptron_values(spec, act, point, samples);
  BatchedStat s = k_stat_batched(values, r);
  return {s.value, s.stderr_, samples};
}

McEstimate zenn_width_cumulant_mc(const ShallowZeNNArch& arch, const InitSpec& spec, double x,
                                  int r, long samples) {
  std::vector<double> values = sample_zenn_values(arch, spec, x, samples);
  BatchedStat s = k_stat_batched(values, r);
  return {s.value, s.stderr_, samples};
}

McEstimate mlp_width_cumulant_mc(const ShallowMLPArch& arch, const InitSpec& spec, double x, int r,
                                 long samples) {
  std::vector<double> values = sample_mlp_values(arch, spec, x, samples);
  BatchedStat s = k_stat_batched(values, r);
  return {s.value, s.stderr_, samples};
}

// ---------------------------------------------------------------------------
// Cumulant series

double zenn_cumulant_series(const std::function<double(double)>& lambda_r, int r, double alpha,
                            double x, long n, int growth_order) {
  if (r < 1) throw std::invalid_argument("zenn_cumulant_series: order must be >= 1");
  const double rd = static_cast<double>(r);
  if (n >= 0) {
    double sum = 0.0;
    for (long j = 1; j <= n; ++j)
      sum += lambda_r(static_cast<double>(j) * x) / std::pow(static_cast<double>(j), rd * alpha);
    return sum;
  }
  // Infinite sum: run until the term bound drops below the tolerance.
  const double k = static_cast<double>(growth_order);
  if (!(rd * (alpha - k) > 1.0))
    throw std::invalid_argument("zenn_cumulant_series: needs r*(alpha-k) > 1 for the full series");
  constexpr double kTol = 1e-12;
  constexpr long kMaxTerms = 20'000'000;
  double sum = 0.0;
  for (long j = 1;; ++j) {
    double jd = static_cast<double>(j);
    double bound = std::pow(1.0 + std::abs(jd * x), rd * k) / std::pow(jd, rd * (alpha - k));
    if (bound < kTol) break;
    if (j > kMaxTerms)
      throw std::runtime_error("zenn_cumulant_series: series converges too slowly");
    sum += lambda_r(jd * x) / std::pow(jd, rd * alpha);
  }
  return sum;
}

SeriesMc zenn_cumulant_series_mc(const InitSpec& spec, Activation act, int r, double alpha,
                                 double x, int n, long samples_per_term) {
  SeriesMc out;
  double var = 0.0;
  for (int j = 1; j <= n; ++j) {
    InitSpec term = spec;
    term.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(j));
    McEstimate e = perceptron_cumulant_mc(term, act, j * x, r, samples_per_term);
    double scale = std::pow(j, -static_cast<double>(r) * alpha);
    out.value += scale * e.value;
    var += scale * scale * e.stderr_ * e.stderr_;
  }
  out.stderr_ = std::sqrt(var);
  return out;
}

double mlp_cumulant_scaling(double lambda_r, int r, long n) {
  return lambda_r / std::pow(static_cast<double>(n), 0.5 * static_cast<double>(r) - 1.0);
}

// ---------------------------------------------------------------------------
// Characteristic functions

namespace {

double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

}  // namespace

std::complex<double> charfn_relu_uniform(double x, double t, double L, double B, double alpha,
                                         int n) {
  if (!(x > 0.0)) throw std::invalid_argument("charfn_relu_uniform: requires x > 0");
  if (!(L > 0.0) || !(B > 0.0))
    throw std::invalid_argument("charfn_relu_uniform: requires L > 0 and B > 0");
  if (n < 1) throw std::invalid_argument("charfn_relu_uniform: requires n >= 1");
  const std::complex<double> iunit(0.0, 1.0);
  std::complex<double> prod(1.0, 0.0);
  for (int j = 1; j <= n; ++j) {
    double s = t / std::pow(j, alpha);
    if (s == 0.0) continue;  // factor is 1
    double jx = static_cast<double>(j) * x;
    std::complex<double> factor_i;
    if (jx * L <= B) {
      factor_i = (std::exp(iunit * (B * s)) * sinc(jx * L * s) - 1.0) / (2.0 * iunit * B * s);
    } else {
      factor_i = (std::exp(iunit * (jx * L * s)) * sinc(B * s) - 1.0) / (2.0 * iunit * jx * L * s);
    }
    prod *= factor_i + 0.5;
  }
  return prod;
}

McComplex charfn_mc(const ShallowZeNNArch& arch, const InitSpec& spec, double x, double t,
                    long samples) {
  std::vector<double> values = sample_zenn_values(arch, spec, x, samples);
  std::complex<double> sum(0.0, 0.0);
  for (double f : values) sum += std::complex<double>(std::cos(t * f), std::sin(t * f));
  std::complex<double> mean = sum / static_cast<double>(samples);
  double var = 0.0;
  for (double f : values) {
    double dre = std::cos(t * f) - mean.real();
    double dim = std::sin(t * f) - mean.imag();
    var += dre * dre + dim * dim;
  }
  var /= static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

// ---------------------------------------------------------------------------
// Width-doubling convergence

TailReport convergence_tail(ArchFamily family, double exponent, Activation act,
                            std::span<const long> widths, std::span<const double> grid,
                            const InitSpec& spec) {
  if (widths.empty() || grid.empty())
    throw std::invalid_argument("convergence_tail: widths and grid must be nonempty");
  for (std::size_t i = 1; i < widths.size(); ++i)
    if (widths[i] <= widths[i - 1])
      throw std::invalid_argument("convergence_tail: widths must increase");
  spec.validate();
  const long maxw = 2 * widths.back();

  // One nested parameter sequence: the width-2N network extends the
  // width-N one.
  std::vector<NeuronParams> params(static_cast<std::size_t>(maxw));
  Rng rng(spec.seed);
  for (NeuronParams& p : params) {
    p.w1 = spec.w1.sample(rng);
    p.b1 = spec.b1.sample(rng);
    p.w2 = spec.w2.sample(rng);
    p.b2 = spec.b2.sample(rng);
  }

  TailReport report;
  report.widths.assign(widths.begin(), widths.end());
  report.sup_diff.assign(widths.size(), 0.0);
  for (double x : grid) {
    // Running prefix values f^N(x) snapshotted at every needed width.
    double prefix = 0.0;
    std::vector<double> at_width(static_cast<std::size_t>(maxw) + 1, 0.0);
    for (long j = 1; j <= maxw; ++j) {
      const NeuronParams& p = params[static_cast<std::size_t>(j - 1)];
      double term;
      if (family == ArchFamily::zenn)
        term = std::pow(static_cast<double>(j), -exponent) *
               (p.w2 * act_value(act, p.w1 * static_cast<double>(j) * x + p.b1) + p.b2);
      else
        term = p.w2 * act_value(act, p.w1 * x + p.b1) + p.b2;
      prefix += term;
      at_width[static_cast<std::size_t>(j)] = prefix;
    }
    for (std::size_t k = 0; k < widths.size(); ++k) {
      long n = widths[k];
      double fn = at_width[static_cast<std::size_t>(n)];
      double f2n = at_width[static_cast<std::size_t>(2 * n)];
      if (family == ArchFamily::mlp) {
        fn *= std::pow(static_cast<double>(n), -exponent);
        f2n *= std::pow(static_cast<double>(2 * n), -exponent);
      }
      report.sup_diff[k] = std::max(report.sup_diff[k], std::abs(f2n - fn));
    }
  }

  report.log2_sup_diff.resize(report.sup_diff.size());
  for (std::size_t k = 0; k < report.sup_diff.size(); ++k)
    report.log2_sup_diff[k] = std::log2(report.sup_diff[k]);

  // Least-squares slope of log2 D against log2 N.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(widths.size());
  for (std::size_t k = 0; k < widths.size(); ++k) {
    double lx = std::log2(static_cast<double>(widths[k]));
    double ly = report.log2_sup_diff[k];
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  report.slope = widths.size() > 1 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
  return report;
}

}  // namespace zenn
