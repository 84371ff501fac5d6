#include "commands.hpp"

#include <cmath>
#include <cstdio>

#include "zenn/dataio.hpp"
#include "zenn/metrics.hpp"
#include "zenn/serialize.hpp"
#include "zenn/stochastics.hpp"
#include "zenn/zentk.hpp"

namespace zenncli {

namespace {

std::uint64_t config_seed(const json& cfg) {
  return static_cast<std::uint64_t>(get_int_or(cfg, "seed", 0));
}

// Seed streams: every source of randomness gets its own named stream of
// the master seed, so changing e.g. the split fraction cannot perturb the
// parameter draw.
std::uint64_t seed_for(std::uint64_t master, const char* role) {
  return zenn::derive_seed(master, zenn::stream_id(role));
}

zenn::Dataset load_task_dataset(const json& cfg, std::uint64_t master) {
  std::string task = get_string(cfg, "config", "task");
  if (!cfg.contains("data")) throw ConfigError("missing required section \"data\"");
  const json& data = cfg["data"];
  zenn::Dataset d;
  if (task == "synth1d") {
    check_keys(data, "data", {"n_points", "x_min", "x_max", "noise_std", "train_fraction"});
    d = zenn::synth1d(static_cast<int>(get_int(data, "data", "n_points")),
                      get_number(data, "data", "x_min"), get_number(data, "data", "x_max"),
                      seed_for(master, "data"), get_number_or(data, "noise_std", 0.0));
  } else if (task == "jena") {
    check_keys(data, "data", {"csv_path", "column", "max_rows", "train_fraction"});
    d = zenn::load_jena_csv(get_string(data, "data", "csv_path"),
                            get_string_or(data, "column", "T (degC)"),
                            static_cast<int>(get_int_or(data, "max_rows", 3000)));
  } else {
    throw ConfigError("unknown task \"" + task + "\" (expected synth1d or jena)");
  }
  double fraction = get_number_or(data, "train_fraction", 1.0);
  if (fraction < 1.0) d = zenn::random_split(std::move(d), fraction, seed_for(master, "split"));
  return d;
}

zenn::Model build_shallow_model(const json& cfg, std::uint64_t master) {
  if (!cfg.contains("model")) throw ConfigError("missing required section \"model\"");
  const json& m = cfg["model"];
  std::string type = get_string(m, "model", "type");
  zenn::Model model;
  if (type == "shallow_zenn") {
    check_keys(m, "model", {"type", "n", "alpha", "activation"});
    model = zenn::ShallowZeNN::make(static_cast<int>(get_int(m, "model", "n")),
                                    get_number(m, "model", "alpha"),
                                    parse_activation(m, "model", "activation"));
  } else if (type == "shallow_mlp") {
    check_keys(m, "model", {"type", "n", "beta", "activation"});
    model = zenn::ShallowMLP::make(static_cast<int>(get_int(m, "model", "n")),
                                   get_number(m, "model", "beta"),
                                   parse_activation(m, "model", "activation"));
  } else {
    throw ConfigError("unknown model type \"" + type +
                      "\" (expected shallow_zenn or shallow_mlp)");
  }
  zenn::InitSpec spec = parse_init(cfg, seed_for(master, "init"));
  init_model(model, spec);
  return model;
}

const json& output_section(const json& cfg) {
  if (!cfg.contains("output")) throw ConfigError("missing required section \"output\"");
  return cfg["output"];
}

void print_final_metrics(const zenn::TrainTrace& trace) {
  if (trace.rows.empty()) return;
  const zenn::TraceRow& last = trace.rows.back();
  std::printf("epoch %ld train_mse %.10g", last.epoch, last.train_mse);
  if (last.val_mse) std::printf(" val_mse %.10g", *last.val_mse);
  if (last.psnr) std::printf(" val_psnr %.10g", *last.psnr);
  std::printf("\n");
}

}  // namespace

// ---------------------------------------------------------------------------
// train

int cmd_train(const json& cfg, bool timing) {
  check_keys(cfg, "config", {"task", "seed", "data", "model", "init", "train", "output"});
  std::uint64_t master = config_seed(cfg);
  zenn::Dataset data = load_task_dataset(cfg, master);
  zenn::Model model = build_shallow_model(cfg, master);
  zenn::TrainConfig train_cfg = parse_train(cfg, master);
  const json& out = output_section(cfg);
  check_keys(out, "output", {"metrics_csv", "model_file"});

  log_info("training on " + std::to_string(data.count(zenn::Split::train)) + " samples for " +
           std::to_string(train_cfg.epochs) + " epochs");
  zenn::TrainResult result = zenn::train_gd(std::move(model), data, train_cfg);

  if (out.contains("metrics_csv")) {
    std::string path = get_string(out, "output", "metrics_csv");
    ensure_parent_dir(path);
    zenn::write_trace_csv(result.trace, path, timing);
  }
  if (out.contains("model_file")) {
    std::string path = get_string(out, "output", "model_file");
    ensure_parent_dir(path);
    zenn::save_model_file(result.model, path);
  }
  print_final_metrics(result.trace);
  return 0;
}

// ---------------------------------------------------------------------------
// image-regress

namespace {

zenn::DeepModel build_image_model(const json& model_cfg, std::uint64_t master) {
  check_keys(model_cfg, "model",
             {"variant", "first", "hidden_layers", "hidden_units", "init_scheme", "init_gain"});
  std::string variant = get_string(model_cfg, "model", "variant");
  if (!model_cfg.contains("first")) throw ConfigError("model: missing section \"first\"");
  const json& first = model_cfg["first"];
  check_keys(first, "model.first", {"units", "n", "m", "alpha", "rho"});

  zenn::DeepModel dm;
  using zenn::Activation;
  if (variant == "mlp") {
    int units = static_cast<int>(get_int(first, "model.first", "units"));
    dm.layers.emplace_back(zenn::DenseLayer::make(2, units, 0.0, Activation::relu));
  } else if (variant == "ozenn" || variant == "radzenn" || variant == "randozenn") {
    int n = static_cast<int>(get_int(first, "model.first", "n"));
    double alpha = get_number_or(first, "alpha", 0.0);
    std::vector<zenn::Layer> parts;
    if (variant == "ozenn") {
      parts.emplace_back(zenn::OZeNNLayer::make(2, n, alpha, Activation::sine));
      parts.emplace_back(zenn::OZeNNLayer::make(2, n, alpha, Activation::cosine));
    } else if (variant == "radzenn") {
      parts.emplace_back(zenn::RadZeNNLayer::make(2, n, alpha, Activation::sine));
      parts.emplace_back(zenn::RadZeNNLayer::make(2, n, alpha, Activation::cosine));
    } else {
      int m = static_cast<int>(get_int(first, "model.first", "m"));
      parts.emplace_back(zenn::RandoZeNNLayer::make(2, n, m, alpha, Activation::sine,
                                                    seed_for(master, "first-sine")));
      parts.emplace_back(zenn::RandoZeNNLayer::make(2, n, m, alpha, Activation::cosine,
                                                    seed_for(master, "first-cosine")));
    }
    dm.layers.emplace_back(zenn::ConcatLayer::make(std::move(parts)));
  } else if (variant == "ff" || variant == "ff_trainable") {
    int n = static_cast<int>(get_int(first, "model.first", "n"));
    double rho = get_number(first, "model.first", "rho");
    dm.layers.emplace_back(zenn::FourierLayer::make(2, n, rho, variant == "ff_trainable",
                                                    seed_for(master, "first-fourier")));
  } else {
    throw ConfigError("unknown model variant \"" + variant +
                      "\" (expected mlp, ozenn, radzenn, randozenn, ff or ff_trainable)");
  }

  long hidden_layers = get_int_or(model_cfg, "hidden_layers", 3);
  int hidden_units = static_cast<int>(get_int_or(model_cfg, "hidden_units", 256));
  int prev = dm.layers.back().output_dim();
  for (long i = 0; i < hidden_layers; ++i) {
    dm.layers.emplace_back(zenn::DenseLayer::make(prev, hidden_units, 0.0, Activation::relu));
    prev = hidden_units;
  }
  dm.layers.emplace_back(zenn::DenseLayer::make(prev, 3, 0.0, Activation::identity));
  dm.validate();
  return dm;
}

void init_image_model(zenn::DeepModel& dm, const json& model_cfg, std::uint64_t master) {
  std::string scheme = get_string_or(model_cfg, "init_scheme", "scaled_normal");
  double gain = get_number_or(model_cfg, "init_gain", 1.0);
  zenn::Rng rng(seed_for(master, "init"));
  for (zenn::Layer& layer : dm.layers) {
    zenn::Dist w = zenn::Dist::normal(0.0, 1.0);
    if (scheme == "scaled_normal") {
      w = zenn::Dist::normal(0.0, gain / std::sqrt(static_cast<double>(layer.input_dim())));
    } else if (scheme != "unit_normal") {
      throw ConfigError("unknown init_scheme \"" + scheme +
                        "\" (expected scaled_normal or unit_normal)");
    }
    zenn::init_layer(layer, w, zenn::Dist::constant(0.0), rng);
  }
}

}  // namespace

int cmd_image_regress(const json& cfg, bool timing) {
  check_keys(cfg, "config", {"seed", "data", "model", "train", "output"});
  std::uint64_t master = config_seed(cfg);
  if (!cfg.contains("data")) throw ConfigError("missing required section \"data\"");
  const json& data_cfg = cfg["data"];
  check_keys(data_cfg, "data", {"ppm", "train_fraction"});
  zenn::ImageDataset image = zenn::load_ppm(get_string(data_cfg, "data", "ppm"));
  double fraction = get_number_or(data_cfg, "train_fraction", 0.75);
  zenn::Dataset data = zenn::random_split(image.data, fraction, seed_for(master, "split"));

  if (!cfg.contains("model")) throw ConfigError("missing required section \"model\"");
  zenn::DeepModel dm = build_image_model(cfg["model"], master);
  init_image_model(dm, cfg["model"], master);
  zenn::TrainConfig train_cfg = parse_train(cfg, master);
  const json& out = output_section(cfg);
  check_keys(out, "output", {"metrics_csv", "predicted_ppm", "model_file"});

  log_info("image " + std::to_string(image.width) + "x" + std::to_string(image.height) + ", " +
           std::to_string(data.count(zenn::Split::train)) + " train pixels, " +
           std::to_string(zenn::param_count(zenn::Model(dm))) + " parameters");
  zenn::TrainResult result = zenn::train_gd(zenn::Model(std::move(dm)), data, train_cfg, true);

  if (out.contains("metrics_csv")) {
    std::string path = get_string(out, "output", "metrics_csv");
    ensure_parent_dir(path);
    zenn::write_trace_csv(result.trace, path, timing);
  }
  if (out.contains("predicted_ppm")) {
    std::string path = get_string(out, "output", "predicted_ppm");
    ensure_parent_dir(path);
    zenn::save_ppm(zenn::predicted_image(result.model, image.width, image.height), path);
  }
  if (out.contains("model_file")) {
    std::string path = get_string(out, "output", "model_file");
    ensure_parent_dir(path);
    zenn::save_model_file(result.model, path);
  }
  print_final_metrics(result.trace);
  return 0;
}

// ---------------------------------------------------------------------------
// zentk

int cmd_zentk(const json& cfg) {
  check_keys(cfg, "config", {"seed", "model", "init", "points", "output", "gronwall"});
  std::uint64_t master = config_seed(cfg);
  if (!cfg.contains("model")) throw ConfigError("missing required section \"model\"");
  const json& m = cfg["model"];
  check_keys(m, "model", {"n", "alpha", "activation"});
  zenn::ShallowZeNN net = zenn::ShallowZeNN::make(static_cast<int>(get_int(m, "model", "n")),
                                                  get_number(m, "model", "alpha"),
                                                  parse_activation(m, "model", "activation"));
  zenn::InitSpec spec = parse_init(cfg, seed_for(master, "init"));
  init_model(net, spec);

  if (!cfg.contains("points")) throw ConfigError("missing required section \"points\"");
  std::vector<double> points = parse_grid(cfg["points"], "points");
  zenn::KernelMatrix gram = zenn::zentk_gram(net, points);

  const json& out = output_section(cfg);
  check_keys(out, "output", {"gram_csv", "eigenvalues_csv"});
  if (out.contains("gram_csv")) {
    std::string path = get_string(out, "output", "gram_csv");
    ensure_parent_dir(path);
    zenn::write_gram_csv(gram, path);
  }
  std::vector<double> eig = zenn::symmetric_eigenvalues(gram.k, gram.n);
  if (out.contains("eigenvalues_csv")) {
    std::string path = get_string(out, "output", "eigenvalues_csv");
    ensure_parent_dir(path);
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot create CSV file: " + path);
    std::fprintf(f, "index,eigenvalue\n");
    for (std::size_t i = 0; i < eig.size(); ++i)
      std::fprintf(f, "%zu,%.17g\n", i, eig[i]);
    std::fclose(f);
  }
  std::printf("gram %dx%d lambda_min %.10g lambda_max %.10g\n", gram.n, gram.n, eig.front(),
              eig.back());

  if (cfg.contains("gronwall")) {
    const json& gw = cfg["gronwall"];
    check_keys(gw, "gronwall", {"data", "eta", "epochs", "output_csv"});
    if (!gw.contains("data")) throw ConfigError("gronwall: missing section \"data\"");
    const json& gd = gw["data"];
    check_keys(gd, "gronwall.data", {"n_points", "x_min", "x_max", "noise_std"});
    zenn::Dataset data = zenn::synth1d(static_cast<int>(get_int(gd, "gronwall.data", "n_points")),
                                       get_number(gd, "gronwall.data", "x_min"),
                                       get_number(gd, "gronwall.data", "x_max"),
                                       seed_for(master, "gronwall-data"),
                                       get_number_or(gd, "noise_std", 0.0));
    double eta = get_number(gw, "gronwall", "eta");
    long epochs = get_int(gw, "gronwall", "epochs");
    std::vector<zenn::KernelTracePoint> trace = zenn::kernel_trace_run(net, data, eta, epochs);
    zenn::GronwallReport report = zenn::gronwall_diagnostic(trace, eta);
    if (gw.contains("output_csv")) {
      std::string path = get_string(gw, "gronwall", "output_csv");
      ensure_parent_dir(path);
      zenn::write_gronwall_csv(report, path);
    }
    std::printf("gronwall steps %zu violations %d\n", report.steps.size(), report.violations);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cumulants

int cmd_cumulants(const json& cfg) {
  check_keys(cfg, "config",
             {"seed", "arch", "init", "x", "orders", "samples", "perceptron_cumulant", "output"});
  std::uint64_t master = config_seed(cfg);
  if (!cfg.contains("arch")) throw ConfigError("missing required section \"arch\"");
  const json& a = cfg["arch"];
  check_keys(a, "arch", {"n", "alpha", "activation"});
  zenn::ShallowZeNNArch arch;
  arch.n = static_cast<int>(get_int(a, "arch", "n"));
  arch.alpha = get_number(a, "arch", "alpha");
  arch.act = parse_activation(a, "arch", "activation");
  double x = get_number(cfg, "config", "x");
  long samples = get_int_or(cfg, "samples", 1000000);

  std::vector<int> orders;
  if (!cfg.contains("orders")) throw ConfigError("missing required key \"orders\"");
  for (const json& v : cfg["orders"]) {
    if (!v.is_number_integer()) throw ConfigError("orders must be integers");
    orders.push_back(v.get<int>());
  }

  std::string mode = "mc";
  double constant_value = 0.0;
  if (cfg.contains("perceptron_cumulant")) {
    const json& pc = cfg["perceptron_cumulant"];
    check_keys(pc, "perceptron_cumulant", {"mode", "value"});
    mode = get_string(pc, "perceptron_cumulant", "mode");
    if (mode == "constant") {
      constant_value = get_number(pc, "perceptron_cumulant", "value");
    } else if (mode != "mc") {
      throw ConfigError("perceptron_cumulant.mode must be \"mc\" or \"constant\"");
    }
  }

  zenn::InitSpec spec = parse_init(cfg, 0);
  const json& out = output_section(cfg);
  check_keys(out, "output", {"csv"});
  std::string path = get_string(out, "output", "csv");
  ensure_parent_dir(path);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot create CSV file: " + path);
  std::fprintf(f, "r,n,alpha,x,analytic,mc,mc_stderr,samples\n");
  for (int r : orders) {
    zenn::CumulantReport row;
    row.r = r;
    row.n = arch.n;
    row.alpha = arch.alpha;
    row.x = x;
    row.samples = samples;
    if (mode == "constant") {
      row.analytic = zenn::zenn_cumulant_series([&](double) { return constant_value; }, r,
                                                arch.alpha, x, arch.n);
    } else {
      zenn::InitSpec series_spec = spec;
      series_spec.seed = seed_for(master, "series");
      row.analytic =
          zenn::zenn_cumulant_series_mc(series_spec, arch.act, r, arch.alpha, x, arch.n, samples)
              .value;
    }
    zenn::InitSpec mc_spec = spec;
    mc_spec.seed = zenn::derive_seed(seed_for(master, "mc"), static_cast<std::uint64_t>(r));
    zenn::McEstimate mc = zenn::zenn_width_cumulant_mc(arch, mc_spec, x, r, samples);
    row.mc = mc.value;
    row.mc_stderr = mc.stderr_;
    std::fprintf(f, "%d,%ld,%.10g,%.10g,%.10g,%.10g,%.10g,%ld\n", row.r, row.n, row.alpha, row.x,
                 row.analytic, row.mc, row.mc_stderr, row.samples);
    std::printf("r=%d analytic %.6f mc %.6f +- %.6f\n", r, row.analytic, row.mc, row.mc_stderr);
  }
  std::fclose(f);
  return 0;
}

// ---------------------------------------------------------------------------
// charfn

int cmd_charfn(const json& cfg) {
  check_keys(cfg, "config", {"seed", "x", "L", "B", "alpha", "n", "t", "samples", "output"});
  std::uint64_t master = config_seed(cfg);
  double x = get_number(cfg, "config", "x");
  double L = get_number(cfg, "config", "L");
  double B = get_number(cfg, "config", "B");
  double alpha = get_number(cfg, "config", "alpha");
  int n = static_cast<int>(get_int(cfg, "config", "n"));
  long samples = get_int_or(cfg, "samples", 100000);
  if (!cfg.contains("t")) throw ConfigError("missing required section \"t\"");
  std::vector<double> ts = parse_grid(cfg["t"], "t");

  zenn::ShallowZeNNArch arch{n, alpha, zenn::Activation::relu};
  zenn::InitSpec family;
  family.w1 = zenn::Dist::uniform(-L, L);
  family.b1 = zenn::Dist::uniform(-B, B);
  family.w2 = zenn::Dist::constant(1.0);
  family.b2 = zenn::Dist::constant(0.0);

  const json& out = output_section(cfg);
  check_keys(out, "output", {"csv"});
  std::string path = get_string(out, "output", "csv");
  ensure_parent_dir(path);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot create CSV file: " + path);
  std::fprintf(f, "t,analytic_re,analytic_im,mc_re,mc_im,mc_stderr,samples\n");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double t = ts[i];
    std::complex<double> analytic = zenn::charfn_relu_uniform(x, t, L, B, alpha, n);
    zenn::InitSpec draw = family;
    draw.seed = zenn::derive_seed(seed_for(master, "charfn"), static_cast<std::uint64_t>(i));
    zenn::McComplex mc = zenn::charfn_mc(arch, draw, x, t, samples);
    std::fprintf(f, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%ld\n", t, analytic.real(),
                 analytic.imag(), mc.value.real(), mc.value.imag(), mc.stderr_, samples);
  }
  std::fclose(f);
  std::printf("charfn: %zu frequencies written\n", ts.size());
  return 0;
}

// ---------------------------------------------------------------------------
// converge

int cmd_converge(const json& cfg) {
  check_keys(cfg, "config",
             {"seed", "family", "exponent", "activation", "widths", "grid", "init", "seeds",
              "output"});
  std::uint64_t master = config_seed(cfg);
  std::string family_name = get_string_or(cfg, "family", "zenn");
  zenn::ArchFamily family;
  if (family_name == "zenn") {
    family = zenn::ArchFamily::zenn;
  } else if (family_name == "mlp") {
    family = zenn::ArchFamily::mlp;
  } else {
    throw ConfigError("unknown family \"" + family_name + "\" (expected zenn or mlp)");
  }
  double exponent = get_number(cfg, "config", "exponent");
  zenn::Activation act = parse_activation(cfg, "config", "activation");
  if (!cfg.contains("widths")) throw ConfigError("missing required key \"widths\"");
  std::vector<long> widths;
  for (const json& v : cfg["widths"]) {
    if (!v.is_number_integer()) throw ConfigError("widths must be integers");
    widths.push_back(v.get<long>());
  }
  if (!cfg.contains("grid")) throw ConfigError("missing required section \"grid\"");
  std::vector<double> grid = parse_grid(cfg["grid"], "grid");
  long reps = get_int_or(cfg, "seeds", 1);
  if (reps < 1) throw ConfigError("seeds must be >= 1");

  zenn::InitSpec base = parse_init(cfg, 0);
  std::vector<double> mean_diff(widths.size(), 0.0);
  double mean_slope = 0.0;
  for (long rep = 0; rep < reps; ++rep) {
    zenn::InitSpec spec = base;
    spec.seed = zenn::derive_seed(seed_for(master, "tail"), static_cast<std::uint64_t>(rep));
    zenn::TailReport r = zenn::convergence_tail(family, exponent, act, widths, grid, spec);
    for (std::size_t k = 0; k < widths.size(); ++k) mean_diff[k] += r.sup_diff[k];
    mean_slope += r.slope;
  }
  for (double& v : mean_diff) v /= static_cast<double>(reps);
  mean_slope /= static_cast<double>(reps);

  const json& out = output_section(cfg);
  check_keys(out, "output", {"csv"});
  std::string path = get_string(out, "output", "csv");
  ensure_parent_dir(path);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot create CSV file: " + path);
  std::fprintf(f, "width,mean_sup_diff,mean_log2_sup_diff\n");
  for (std::size_t k = 0; k < widths.size(); ++k)
    std::fprintf(f, "%ld,%.10g,%.10g\n", widths[k], mean_diff[k], std::log2(mean_diff[k]));
  std::fclose(f);
  std::printf("converge %s: fitted slope %.4f over %ld seeds\n", family_name.c_str(), mean_slope,
              reps);
  return 0;
}

// ---------------------------------------------------------------------------
// synth1d emission

int cmd_synth1d(const json& cfg) {
  check_keys(cfg, "config", {"seed", "n_points", "x_min", "x_max", "noise_std", "output"});
  std::uint64_t master = config_seed(cfg);
  zenn::Dataset d = zenn::synth1d(static_cast<int>(get_int(cfg, "config", "n_points")),
                                  get_number(cfg, "config", "x_min"),
                                  get_number(cfg, "config", "x_max"), seed_for(master, "data"),
                                  get_number_or(cfg, "noise_std", 0.0));
  const json& out = output_section(cfg);
  check_keys(out, "output", {"csv"});
  std::string path = get_string(out, "output", "csv");
  ensure_parent_dir(path);
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot create CSV file: " + path);
  std::fprintf(f, "x,y\n");
  for (int i = 0; i < d.size(); ++i)
    std::fprintf(f, "%.17g,%.17g\n", d.input(i)[0], d.target(i)[0]);
  std::fclose(f);
  std::printf("synth1d: %d points written\n", d.size());
  return 0;
}

}  // namespace zenncli
