#include "zenn/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace zenn {

namespace {

constexpr const char* kMagic = "zenn-model";
constexpr const char* kVersion = "v1";

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_params(std::string& out, std::span<const double> p) {
  out += "params ";
  out += std::to_string(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += (i % 8 == 0) ? '\n' : ' ';
    append_number(out, p[i]);
  }
  out += '\n';
}

void write_layer(std::string& out, const Layer& layer);

void write_layer_params(std::string& out, const Layer& layer) {
  std::vector<double> p(static_cast<std::size_t>(layer.param_count()));
  layer.get_params(p);
  append_params(out, p);
}

void write_layer(std::string& out, const Layer& layer) {
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        char buf[160];
        if constexpr (std::is_same_v<T, DenseLayer>) {
          std::snprintf(buf, sizeof(buf), "layer dense in %d out %d alpha %.17g activation %s\n",
                        l.in, l.out, l.alpha, to_string(l.act));
          out += buf;
          write_layer_params(out, layer);
        } else if constexpr (std::is_same_v<T, OZeNNLayer>) {
          std::snprintf(buf, sizeof(buf), "layer ozenn d %d n %d alpha %.17g activation %s\n", l.d,
                        l.n, l.alpha, to_string(l.act));
          out += buf;
          write_layer_params(out, layer);
        } else if constexpr (std::is_same_v<T, RadZeNNLayer>) {
          std::snprintf(buf, sizeof(buf), "layer radzenn d %d n %d alpha %.17g activation %s\n",
                        l.d, l.n, l.alpha, to_string(l.act));
          out += buf;
          write_layer_params(out, layer);
        } else if constexpr (std::is_same_v<T, RandoZeNNLayer>) {
          std::snprintf(buf, sizeof(buf),
                        "layer randozenn d %d n %d m %d alpha %.17g activation %s\n", l.d, l.n,
                        l.m, l.alpha, to_string(l.act));
          out += buf;
          out += "indices " + std::to_string(l.idx.size());
          for (std::size_t i = 0; i < l.idx.size(); ++i) {
            out += (i % 16 == 0) ? '\n' : ' ';
            out += std::to_string(l.idx[i]);
          }
          out += '\n';
          write_layer_params(out, layer);
        } else if constexpr (std::is_same_v<T, FourierLayer>) {
          std::snprintf(buf, sizeof(buf), "layer fourier d %d n %d rho %.17g trainable %d\n", l.d,
                        l.n, l.rho, l.trainable ? 1 : 0);
          out += buf;
          // The frequency matrix is stored whether or not it is trainable.
          out += "bmatrix " + std::to_string(l.bmat.size());
          for (std::size_t i = 0; i < l.bmat.size(); ++i) {
            out += (i % 8 == 0) ? '\n' : ' ';
            append_number(out, l.bmat[i]);
          }
          out += '\n';
        } else if constexpr (std::is_same_v<T, KAZeNNLayer>) {
          const ShallowZeNN& e = l.edges.front();
          std::snprintf(buf, sizeof(buf),
                        "layer kazenn in %d out %d edge_n %d edge_alpha %.17g activation %s\n",
                        l.in, l.out, e.n, e.alpha, to_string(e.act));
          out += buf;
          write_layer_params(out, layer);
        } else if constexpr (std::is_same_v<T, ConcatLayer>) {
          std::snprintf(buf, sizeof(buf), "layer concat parts %zu\n", l.parts.size());
          out += buf;
          for (const Layer& p : l.parts) write_layer(out, p);
        }
      },
      layer.v);
}

// --- parsing -----------------------------------------------------------

struct TokenReader {
  std::vector<std::string> toks;
  std::size_t pos = 0;

  explicit TokenReader(std::string_view text) {
    std::string cur;
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) {
          toks.push_back(cur);
          cur.clear();
        }
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) toks.push_back(cur);
  }

  bool done() const { return pos >= toks.size(); }

  const std::string& next() {
    if (done()) throw MalformedModelError("model document: unexpected end of input");
    return toks[pos++];
  }

  void expect(const char* word) {
    const std::string& t = next();
    if (t != word)
      throw MalformedModelError("model document: expected \"" + std::string(word) + "\", got \"" +
                                t + "\"");
  }

  long next_int() {
    const std::string& t = next();
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
      throw MalformedModelError("model document: expected integer, got \"" + t + "\"");
    return v;
  }

  double next_double() {
    const std::string& t = next();
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
      throw MalformedModelError("model document: expected number, got \"" + t + "\"");
    return v;
  }

  Activation next_activation() {
    const std::string& t = next();
    Activation a;
    if (!activation_from_string(t, a))
      throw MalformedModelError("model document: unknown activation \"" + t + "\"");
    return a;
  }
};

std::vector<double> read_params(TokenReader& r, int expected) {
  r.expect("params");
  long count = r.next_int();
  if (count != expected)
    throw DimMismatchError("model document: params block has " + std::to_string(count) +
                           " entries, architecture needs " + std::to_string(expected));
  std::vector<double> p(static_cast<std::size_t>(count));
  for (double& v : p) v = r.next_double();
  return p;
}

int checked_dim(long v, const char* what) {
  if (v <= 0 || v > (1L << 30)) throw DimMismatchError(std::string("model document: bad ") + what);
  return static_cast<int>(v);
}

Layer read_layer(TokenReader& r) {
  r.expect("layer");
  const std::string kind = r.next();
  try {
    if (kind == "dense") {
      r.expect("in");
      int in = checked_dim(r.next_int(), "dense input dim");
      r.expect("out");
      int out = checked_dim(r.next_int(), "dense output dim");
      r.expect("alpha");
      double alpha = r.next_double();
      r.expect("activation");
      Activation act = r.next_activation();
      DenseLayer l = DenseLayer::make(in, out, alpha, act);
      Layer layer(std::move(l));
      std::vector<double> p = read_params(r, layer.param_count());
      layer.set_params(p);
      return layer;
    }
    if (kind == "ozenn" || kind == "radzenn") {
      r.expect("d");
      int d = checked_dim(r.next_int(), "lattice input dim");
      r.expect("n");
      int n = checked_dim(r.next_int(), "lattice size");
      r.expect("alpha");
      double alpha = r.next_double();
      r.expect("activation");
      Activation act = r.next_activation();
      Layer layer = kind == "ozenn" ? Layer(OZeNNLayer::make(d, n, alpha, act))
                                    : Layer(RadZeNNLayer::make(d, n, alpha, act));
      std::vector<double> p = read_params(r, layer.param_count());
      layer.set_params(p);
      return layer;
    }
    if (kind == "randozenn") {
      r.expect("d");
      int d = checked_dim(r.next_int(), "randozenn input dim");
      r.expect("n");
      int n = checked_dim(r.next_int(), "randozenn lattice size");
      r.expect("m");
      int m = checked_dim(r.next_int(), "randozenn output dim");
      r.expect("alpha");
      double alpha = r.next_double();
      r.expect("activation");
      Activation act = r.next_activation();
      RandoZeNNLayer l = RandoZeNNLayer::make(d, n, m, alpha, act, 0);
      r.expect("indices");
      long count = r.next_int();
      if (count != static_cast<long>(l.idx.size()))
        throw DimMismatchError("model document: randozenn index count mismatch");
      for (std::int32_t& v : l.idx) {
        long j = r.next_int();
        if (j < 1 || j > n) throw DimMismatchError("model document: randozenn index out of range");
        v = static_cast<std::int32_t>(j);
      }
      l.refresh_decay();
      Layer layer(std::move(l));
      std::vector<double> p = read_params(r, layer.param_count());
      layer.set_params(p);
      return layer;
    }
    if (kind == "fourier") {
      r.expect("d");
      int d = checked_dim(r.next_int(), "fourier input dim");
      r.expect("n");
      int n = checked_dim(r.next_int(), "fourier size");
      r.expect("rho");
      double rho = r.next_double();
      r.expect("trainable");
      long tr = r.next_int();
      if (tr != 0 && tr != 1) throw MalformedModelError("model document: bad trainable flag");
      FourierLayer l = FourierLayer::make(d, n, rho, tr == 1, 0);
      r.expect("bmatrix");
      long count = r.next_int();
      if (count != static_cast<long>(l.bmat.size()))
        throw DimMismatchError("model document: fourier matrix size mismatch");
      for (double& v : l.bmat) v = r.next_double();
      return Layer(std::move(l));
    }
    if (kind == "kazenn") {
      r.expect("in");
      int in = checked_dim(r.next_int(), "kazenn input dim");
      r.expect("out");
      int out = checked_dim(r.next_int(), "kazenn output dim");
      r.expect("edge_n");
      int edge_n = checked_dim(r.next_int(), "kazenn edge width");
      r.expect("edge_alpha");
      double edge_alpha = r.next_double();
      r.expect("activation");
      Activation act = r.next_activation();
      Layer layer(KAZeNNLayer::make(in, out, edge_n, edge_alpha, act));
      std::vector<double> p = read_params(r, layer.param_count());
      layer.set_params(p);
      return layer;
    }
    if (kind == "concat") {
      r.expect("parts");
      long count = r.next_int();
      if (count < 1 || count > 64) throw DimMismatchError("model document: bad concat part count");
      std::vector<Layer> parts;
      parts.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i) parts.push_back(read_layer(r));
      return Layer(ConcatLayer::make(std::move(parts)));
    }
  } catch (const std::invalid_argument& e) {
    throw MalformedModelError(std::string("model document: ") + e.what());
  }
  throw MalformedModelError("model document: unknown layer kind \"" + kind + "\"");
}

template <typename Net>
Net read_shallow(TokenReader& r, bool zenn) {
  r.expect("n");
  int n = checked_dim(r.next_int(), "shallow width");
  r.expect(zenn ? "alpha" : "beta");
  double exponent = r.next_double();
  r.expect("activation");
  Activation act = r.next_activation();
  Net net;
  try {
    net = Net::make(n, exponent, act);
  } catch (const std::invalid_argument& e) {
    throw MalformedModelError(std::string("model document: ") + e.what());
  }
  std::vector<double> p = read_params(r, 4 * n);
  set_params(net, p);
  return net;
}

}  // namespace

std::string serialize_model(const Model& model) {
  std::string out;
  out += kMagic;
  out += ' ';
  out += kVersion;
  out += '\n';
  std::visit(
      [&](const auto& net) {
        using T = std::decay_t<decltype(net)>;
        char buf[120];
        if constexpr (std::is_same_v<T, ShallowZeNN>) {
          std::snprintf(buf, sizeof(buf), "shallow_zenn n %d alpha %.17g activation %s\n", net.n,
                        net.alpha, to_string(net.act));
          out += buf;
          std::vector<double> p(static_cast<std::size_t>(4) * net.n);
          get_params(net, p);
          append_params(out, p);
        } else if constexpr (std::is_same_v<T, ShallowMLP>) {
          std::snprintf(buf, sizeof(buf), "shallow_mlp n %d beta %.17g activation %s\n", net.n,
                        net.beta, to_string(net.act));
          out += buf;
          std::vector<double> p(static_cast<std::size_t>(4) * net.n);
          get_params(net, p);
          append_params(out, p);
        } else {
          std::snprintf(buf, sizeof(buf), "deep layers %zu\n", net.layers.size());
          out += buf;
          for (const Layer& l : net.layers) write_layer(out, l);
        }
      },
      model);
  out += "end\n";
  return out;
}

Model deserialize_model(std::string_view text) {
  TokenReader r(text);
  if (r.done() || r.next() != kMagic)
    throw MalformedModelError("model document: missing magic header");
  const std::string version = r.next();
  if (version != kVersion)
    throw VersionMismatchError("model document: unsupported version \"" + version + "\"");
  const std::string kind = r.next();
  Model model;
  if (kind == "shallow_zenn") {
    model = read_shallow<ShallowZeNN>(r, true);
  } else if (kind == "shallow_mlp") {
    model = read_shallow<ShallowMLP>(r, false);
  } else if (kind == "deep") {
    r.expect("layers");
    long count = r.next_int();
    if (count < 1 || count > 1024) throw DimMismatchError("model document: bad layer count");
    DeepModel deep;
    for (long i = 0; i < count; ++i) deep.layers.push_back(read_layer(r));
    try {
      deep.validate();
    } catch (const std::exception& e) {
      throw DimMismatchError(std::string("model document: ") + e.what());
    }
    model = std::move(deep);
  } else {
    throw MalformedModelError("model document: unknown model kind \"" + kind + "\"");
  }
  r.expect("end");
  return model;
}

void save_model_file(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SerializeError("cannot create model file: " + path);
  std::string text = serialize_model(model);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw SerializeError("failed writing model file: " + path);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SerializeError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace zenn
