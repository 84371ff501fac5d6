#include "zenn/deep.hpp"

namespace zenn {

void DeepModel::validate() const {
  if (layers.empty()) throw std::invalid_argument("DeepModel: needs at least one layer");
  for (std::size_t k = 0; k + 1 < layers.size(); ++k)
    if (layers[k].output_dim() != layers[k + 1].input_dim())
      throw DimensionMismatch("DeepModel: layer dims are not chain-compatible");
}

int DeepModel::input_dim() const { return layers.front().input_dim(); }
int DeepModel::output_dim() const { return layers.back().output_dim(); }

int DeepModel::param_count() const {
  int total = 0;
  for (const Layer& l : layers) total += l.param_count();
  return total;
}

void model_forward_ws(const DeepModel& model, std::span<const double> x, DeepWorkspace& w) {
  const std::size_t nl = model.layers.size();
  if (static_cast<int>(x.size()) != model.input_dim())
    throw DimensionMismatch("model_forward: input dim mismatch");
  w.acts.resize(nl + 1);
  w.ws.resize(nl);
  w.acts[0].assign(x.begin(), x.end());
  for (std::size_t k = 0; k < nl; ++k) {
    const Layer& l = model.layers[k];
    w.acts[k + 1].resize(static_cast<std::size_t>(l.output_dim()));
    w.ws[k].resize(static_cast<std::size_t>(l.ws_size()));
    l.forward(w.acts[k], w.acts[k + 1], w.ws[k]);
  }
}

void model_backward_ws(const DeepModel& model, std::span<const double> upstream, DeepWorkspace& w,
                       std::span<double> pgrad) {
  const std::size_t nl = model.layers.size();
  if (static_cast<int>(pgrad.size()) != model.param_count())
    throw DimensionMismatch("model_backward: gradient size mismatch");
  if (static_cast<int>(upstream.size()) != model.output_dim())
    throw DimensionMismatch("model_backward: upstream dim mismatch");
  // Per-layer parameter offsets, front to back.
  std::vector<std::size_t> offset(nl + 1, 0);
  for (std::size_t k = 0; k < nl; ++k)
    offset[k + 1] = offset[k] + static_cast<std::size_t>(model.layers[k].param_count());
  w.xgrad_a.assign(upstream.begin(), upstream.end());
  for (std::size_t k = nl; k-- > 0;) {
    const Layer& l = model.layers[k];
    w.xgrad_b.resize(static_cast<std::size_t>(l.input_dim()));
    l.backward(w.acts[k], w.ws[k], w.xgrad_a,
               pgrad.subspan(offset[k], static_cast<std::size_t>(l.param_count())), w.xgrad_b);
    std::swap(w.xgrad_a, w.xgrad_b);
  }
}

std::vector<double> model_forward(const DeepModel& model, std::span<const double> x) {
  DeepWorkspace w;
  model_forward_ws(model, x, w);
  return std::move(w.acts.back());
}

std::vector<double> model_backward(const DeepModel& model, std::span<const double> x,
                                   std::span<const double> upstream) {
  DeepWorkspace w;
  model_forward_ws(model, x, w);
  std::vector<double> pgrad(static_cast<std::size_t>(model.param_count()), 0.0);
  model_backward_ws(model, upstream, w, pgrad);
  return pgrad;
}

void get_params(const DeepModel& model, std::span<double> out) {
  if (static_cast<int>(out.size()) != model.param_count())
    throw DimensionMismatch("DeepModel get_params: size mismatch");
  std::size_t off = 0;
  for (const Layer& l : model.layers) {
    std::size_t np = static_cast<std::size_t>(l.param_count());
    l.get_params(out.subspan(off, np));
    off += np;
  }
}

void set_params(DeepModel& model, std::span<const double> in) {
  if (static_cast<int>(in.size()) != model.param_count())
    throw DimensionMismatch("DeepModel set_params: size mismatch");
  std::size_t off = 0;
  for (Layer& l : model.layers) {
    std::size_t np = static_cast<std::size_t>(l.param_count());
    l.set_params(in.subspan(off, np));
    off += np;
  }
}

void axpy_params(DeepModel& model, double c, std::span<const double> v) {
  if (static_cast<int>(v.size()) != model.param_count())
    throw DimensionMismatch("DeepModel axpy_params: size mismatch");
  std::size_t off = 0;
  for (Layer& l : model.layers) {
    std::size_t np = static_cast<std::size_t>(l.param_count());
    l.axpy_params(c, v.subspan(off, np));
    off += np;
  }
}

}  // namespace zenn
