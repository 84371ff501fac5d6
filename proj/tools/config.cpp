#include "config.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace zenncli {

namespace {

json parse_override_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);  // bare strings stay strings
  return v;
}

}  // namespace

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json cfg = json::parse(in, nullptr, false);
  if (cfg.is_discarded()) throw ConfigError("config file is not valid JSON: " + path);
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object: " + path);

  for (const std::string& ov : overrides) {
    std::size_t eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects key.path=value, got: " + ov);
    std::string keypath = ov.substr(0, eq);
    json value = parse_override_value(ov.substr(eq + 1));
    json* node = &cfg;
    std::size_t start = 0;
    while (true) {
      std::size_t dot = keypath.find('.', start);
      std::string key = keypath.substr(start, dot == std::string::npos ? dot : dot - start);
      if (key.empty()) throw ConfigError("--set has an empty path segment: " + ov);
      if (dot == std::string::npos) {
        (*node)[key] = value;
        break;
      }
      if (!node->contains(key) || !(*node)[key].is_object()) (*node)[key] = json::object();
      node = &(*node)[key];
      start = dot + 1;
    }
  }
  return cfg;
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed) ok |= item.key() == key;
    if (!ok) throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
  }
}

double get_number(const json& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing required key \"" + key + "\"");
  if (!obj[key].is_number()) throw ConfigError(ctx + ": \"" + key + "\" must be a number");
  return obj[key].get<double>();
}

double get_number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
  return obj[key].get<double>();
}

long get_int(const json& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing required key \"" + key + "\"");
  if (!obj[key].is_number_integer()) throw ConfigError(ctx + ": \"" + key + "\" must be an integer");
  return obj[key].get<long>();
}

long get_int_or(const json& obj, const char* key, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw ConfigError(std::string("\"") + key + "\" must be an integer");
  return obj[key].get<long>();
}

std::string get_string(const json& obj, const std::string& ctx, const char* key) {
  if (!obj.contains(key)) throw ConfigError(ctx + ": missing required key \"" + key + "\"");
  if (!obj[key].is_string()) throw ConfigError(ctx + ": \"" + key + "\" must be a string");
  return obj[key].get<std::string>();
}

std::string get_string_or(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError(std::string("\"") + key + "\" must be a string");
  return obj[key].get<std::string>();
}

zenn::Activation parse_activation(const json& obj, const std::string& ctx, const char* key) {
  std::string name = get_string(obj, ctx, key);
  zenn::Activation act;
  if (!zenn::activation_from_string(name, act))
    throw ConfigError(ctx + ": unknown activation \"" + name +
                      "\" (expected sine, cosine, relu, sigmoid or identity)");
  return act;
}

zenn::Dist parse_dist(const json& obj, const std::string& ctx) {
  check_keys(obj, ctx, {"dist", "mean", "std", "lo", "hi", "value"});
  std::string kind = get_string(obj, ctx, "dist");
  zenn::Dist d;
  if (kind == "normal") {
    d = zenn::Dist::normal(get_number_or(obj, "mean", 0.0), get_number(obj, ctx, "std"));
  } else if (kind == "uniform") {
    d = zenn::Dist::uniform(get_number(obj, ctx, "lo"), get_number(obj, ctx, "hi"));
  } else if (kind == "constant") {
    d = zenn::Dist::constant(get_number(obj, ctx, "value"));
  } else {
    throw ConfigError(ctx + ": unknown distribution \"" + kind +
                      "\" (expected normal, uniform or constant)");
  }
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
  return d;
}

zenn::InitSpec parse_init(const json& cfg, std::uint64_t seed) {
  zenn::InitSpec spec = zenn::InitSpec::defaults(seed);
  if (!cfg.contains("init")) return spec;
  const json& init = cfg["init"];
  check_keys(init, "init", {"w1", "b1", "w2", "b2"});
  if (init.contains("w1")) spec.w1 = parse_dist(init["w1"], "init.w1");
  if (init.contains("b1")) spec.b1 = parse_dist(init["b1"], "init.b1");
  if (init.contains("w2")) spec.w2 = parse_dist(init["w2"], "init.w2");
  if (init.contains("b2")) spec.b2 = parse_dist(init["b2"], "init.b2");
  return spec;
}

zenn::TrainConfig parse_train(const json& cfg, std::uint64_t seed) {
  if (!cfg.contains("train")) throw ConfigError("missing required section \"train\"");
  const json& t = cfg["train"];
  check_keys(t, "train", {"learning_rate", "epochs", "log_interval", "weight_decay"});
  zenn::TrainConfig out;
  out.learning_rate = get_number(t, "train", "learning_rate");
  out.epochs = get_int(t, "train", "epochs");
  out.log_interval = get_int_or(t, "log_interval", 100);
  out.weight_decay = get_number_or(t, "weight_decay", 0.0);
  out.seed = seed;
  try {
    out.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  return out;
}

std::vector<double> parse_grid(const json& obj, const std::string& ctx) {
  check_keys(obj, ctx, {"list", "min", "max", "count"});
  std::vector<double> out;
  if (obj.contains("list")) {
    if (!obj["list"].is_array()) throw ConfigError(ctx + ": \"list\" must be an array");
    for (const json& v : obj["list"]) {
      if (!v.is_number()) throw ConfigError(ctx + ": list entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else {
    double lo = get_number(obj, ctx, "min");
    double hi = get_number(obj, ctx, "max");
    long count = get_int(obj, ctx, "count");
    if (count < 1) throw ConfigError(ctx + ": count must be >= 1");
    for (long i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                              static_cast<double>(count - 1));
  }
  if (out.empty()) throw ConfigError(ctx + ": empty grid");
  return out;
}

void ensure_parent_dir(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

namespace {

int log_level() {
  static int level = [] {
    const char* env = std::getenv("ZENN_LOG");
    if (!env) return 1;
    std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
  }();
  return level;
}

}  // namespace

bool log_enabled(int level) { return log_level() >= level; }

void log_info(const std::string& msg) {
  if (log_enabled(1)) std::fprintf(stderr, "[zenn] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
  if (log_enabled(2)) std::fprintf(stderr, "[zenn:debug] %s\n", msg.c_str());
}

}  // namespace zenncli
