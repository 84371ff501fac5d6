#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "zenn/activation.hpp"
#include "zenn/rng.hpp"
#include "zenn/stochastics.hpp"
#include "zenn/train.hpp"

namespace zenncli {

using nlohmann::json;

// Anything wrong with a config file (missing, unparsable, unknown keys,
// bad values). Mapped to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Loads a JSON config file and applies --set key.path=value overrides.
json load_config(const std::string& path, const std::vector<std::string>& overrides);

// Fails on keys outside the allowed set, catching config typos early.
void check_keys(const json& obj, const std::string& ctx, std::initializer_list<const char*> allowed);

double get_number(const json& obj, const std::string& ctx, const char* key);
double get_number_or(const json& obj, const char* key, double fallback);
long get_int(const json& obj, const std::string& ctx, const char* key);
long get_int_or(const json& obj, const char* key, long fallback);
std::string get_string(const json& obj, const std::string& ctx, const char* key);
std::string get_string_or(const json& obj, const char* key, const std::string& fallback);

zenn::Activation parse_activation(const json& obj, const std::string& ctx, const char* key);
zenn::Dist parse_dist(const json& obj, const std::string& ctx);

// "init" section with the four parameter roles; absent roles fall back to
// unit-normal weights and zero biases.
zenn::InitSpec parse_init(const json& cfg, std::uint64_t seed);

zenn::TrainConfig parse_train(const json& cfg, std::uint64_t seed);

// Grid specs appear in several commands: either an explicit "list" or
// {min, max, count} (count >= 1; a single point sits at min).
std::vector<double> parse_grid(const json& obj, const std::string& ctx);

// Creates the parent directory of an output path if needed.
void ensure_parent_dir(const std::string& path);

// stderr logger gated by the ZENN_LOG environment variable
// (quiet | info | debug, default info).
bool log_enabled(int level);  // 1 = info, 2 = debug
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace zenncli
