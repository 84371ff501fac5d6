#include "zenn/zentk.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace zenn {

double zentk_eval(const ShallowZeNN& net, double x, double y) {
  double freq_part = 0.0;  // the j^(2-2a) block
  double tail_part = 0.0;  // the j^(-2a) block
  for (int j = 1; j <= net.n; ++j) {
    const NeuronParams& p = net.neurons[static_cast<std::size_t>(j - 1)];
    double jd = static_cast<double>(j);
    ActEval sx = activation_eval(net.act, p.w1 * jd * x + p.b1);
    ActEval sy = activation_eval(net.act, p.w1 * jd * y + p.b1);
    double w2sq = p.w2 * p.w2;
    double dd = sx.deriv * sy.deriv;
    freq_part += w2sq / std::pow(jd, 2.0 * net.alpha - 2.0) * dd;
    tail_part += std::pow(jd, -2.0 * net.alpha) * (1.0 + sx.value * sy.value + w2sq * dd);
  }
  return x * y * freq_part + tail_part;
}

KernelMatrix zentk_gram(const ShallowZeNN& net, std::span<const double> points) {
  if (points.empty()) throw std::invalid_argument("zentk_gram: no points");
  KernelMatrix km;
  km.n = static_cast<int>(points.size());
  km.points.assign(points.begin(), points.end());
  km.k.assign(static_cast<std::size_t>(km.n) * km.n, 0.0);
  // Upper triangle once; mirror for exact symmetry.
  for (int i = 0; i < km.n; ++i) {
    for (int j = i; j < km.n; ++j) {
      double v = zentk_eval(net, points[static_cast<std::size_t>(i)],
                            points[static_cast<std::size_t>(j)]);
      km.k[static_cast<std::size_t>(i) * km.n + j] = v;
      km.k[static_cast<std::size_t>(j) * km.n + i] = v;
    }
  }
  return km;
}

KernelMatrix empirical_gram(const DeepModel& model,
                            const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw std::invalid_argument("empirical_gram: no points");
  if (model.output_dim() != 1)
    throw std::invalid_argument("empirical_gram: model output must be scalar");
  const int n = static_cast<int>(points.size());
  const std::size_t np = static_cast<std::size_t>(model.param_count());
  std::vector<std::vector<double>> jac;
  jac.reserve(static_cast<std::size_t>(n));
  const double one = 1.0;
  for (const std::vector<double>& x : points) jac.push_back(model_backward(model, x, {&one, 1}));
  KernelMatrix km;
  km.n = n;
  km.k.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t p = 0; p < np; ++p)
        dot += jac[static_cast<std::size_t>(i)][p] * jac[static_cast<std::size_t>(j)][p];
      km.k[static_cast<std::size_t>(i) * n + j] = dot;
      km.k[static_cast<std::size_t>(j) * n + i] = dot;
    }
  }
  return km;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
  if (n <= 0 || a.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("symmetric_eigenvalues: bad matrix size");
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * at(i, j) * at(i, j);
    return std::sqrt(s);
  };
  double fro = 0.0;
  for (double v : a) fro += v * v;
  fro = std::sqrt(fro);
  const double tol = std::max(1e-12, 1e-15 * fro);
  for (int sweep = 0; sweep < 100 && off_norm() >= tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = at(p, q);
        if (apq == 0.0) continue;
        double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);
        double app = at(p, p), aqq = at(q, q);
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          double arp = at(r, p), arq = at(r, q);
          at(r, p) = at(p, r) = arp - s * (arq + tau * arp);
          at(r, q) = at(q, r) = arq + s * (arp - tau * arq);
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double smallest_eigenvalue(const KernelMatrix& km) {
  double scale = 0.0;
  for (double v : km.k) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < km.n; ++i)
    for (int j = 0; j < km.n; ++j)
      if (std::abs(km.at(i, j) - km.at(j, i)) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("smallest_eigenvalue: matrix is not symmetric");
  return symmetric_eigenvalues(km.k, km.n).front();
}

double feature_probe(const ShallowZeNN& net, int j, double x, double y) {
  if (j < 1 || j > net.n) throw std::out_of_range("feature_probe: neuron index out of range");
  const NeuronParams& p = net.neurons[static_cast<std::size_t>(j - 1)];
  double jd = static_cast<double>(j);
  double dx = act_deriv(net.act, p.w1 * jd * x + p.b1);
  double dy = act_deriv(net.act, p.w1 * jd * y + p.b1);
  return 2.0 * std::pow(jd, 2.0 - 2.0 * net.alpha) * (x * y + 1.0 / (jd * jd)) * dx * dy;
}

GronwallReport gronwall_diagnostic(std::span<const KernelTracePoint> trace, double eta) {
  GronwallReport report;
  if (trace.empty()) return report;
  const double loss0 = trace[0].loss;
  double integral = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i > 0) {
      double dt = static_cast<double>(trace[i].epoch - trace[i - 1].epoch) * eta;
      if (dt < 0.0) throw std::invalid_argument("gronwall_diagnostic: epochs must increase");
      integral += 0.5 * (trace[i - 1].lambda_min + trace[i].lambda_min) * dt;
    }
    GronwallStep step;
    step.epoch = trace[i].epoch;
    step.loss = trace[i].loss;
    step.bound = loss0 * std::exp(-2.0 * integral);
    step.margin = step.bound - step.loss;
    step.violated = step.loss > step.bound + 1e-12 * std::max(1.0, loss0);
    if (step.violated) ++report.violations;
    report.steps.push_back(step);
  }
  return report;
}

std::vector<KernelTracePoint> kernel_trace_run(ShallowZeNN net, const Dataset& data, double eta,
                                               long epochs) {
  if (data.in_dim != 1 || data.out_dim != 1)
    throw std::invalid_argument("kernel_trace_run: scalar datasets only");
  std::vector<double> xs;
  std::vector<double> ys;
  for (int i = 0; i < data.size(); ++i) {
    if (data.split[static_cast<std::size_t>(i)] != Split::train) continue;
    xs.push_back(data.input(i)[0]);
    ys.push_back(data.target(i)[0]);
  }
  if (xs.empty()) throw std::invalid_argument("kernel_trace_run: empty training split");

  const std::size_t np = static_cast<std::size_t>(4) * net.neurons.size();
  std::vector<double> grad(np), g(np);
  std::vector<KernelTracePoint> trace;
  for (long epoch = 0; epoch <= epochs; ++epoch) {
    double loss = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double r = zenn_forward(net, xs[i]) - ys[i];
      loss += 0.5 * r * r;
      zenn_backward(net, xs[i], g);
      for (std::size_t k = 0; k < np; ++k) grad[k] += r * g[k];
    }
    KernelTracePoint pt;
    pt.epoch = epoch;
    pt.loss = loss;
    pt.lambda_min = smallest_eigenvalue(zentk_gram(net, xs));
    trace.push_back(pt);
    if (epoch == epochs) break;
    const std::size_t n = net.neurons.size();
    for (std::size_t i = 0; i < n; ++i) {
      net.neurons[i].w1 -= eta * grad[i];
      net.neurons[i].b1 -= eta * grad[n + i];
      net.neurons[i].w2 -= eta * grad[2 * n + i];
      net.neurons[i].b2 -= eta * grad[3 * n + i];
    }
  }
  return trace;
}

void write_gram_csv(const KernelMatrix& km, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot create CSV file: " + path);
  std::fprintf(f, "x");
  for (int j = 0; j < km.n; ++j) {
    if (!km.points.empty())
      std::fprintf(f, ",%.17g", km.points[static_cast<std::size_t>(j)]);
    else
      std::fprintf(f, ",p%d", j);
  }
  std::fprintf(f, "\n");
  for (int i = 0; i < km.n; ++i) {
    if (!km.points.empty())
      std::fprintf(f, "%.17g", km.points[static_cast<std::size_t>(i)]);
    else
      std::fprintf(f, "p%d", i);
    for (int j = 0; j < km.n; ++j) std::fprintf(f, ",%.17g", km.at(i, j));
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

void write_gronwall_csv(const GronwallReport& report, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot create CSV file: " + path);
  std::fprintf(f, "epoch,loss,bound,margin,violated\n");
  for (const GronwallStep& s : report.steps)
    std::fprintf(f, "%ld,%.17g,%.17g,%.17g,%d\n", s.epoch, s.loss, s.bound, s.margin,
                 s.violated ? 1 : 0);
  std::fclose(f);
}

}  // namespace zenn
