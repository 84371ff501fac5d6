#include "zenn/rng.hpp"

#include <cmath>
#include <numbers>

namespace zenn {

double Rng::normal(double mean, double stddev) {
  // u1 in (0, 1] so the log is finite.
  double u1 = 1.0 - uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  Rng mix(master ^ (0xA0761D6478BD642FULL * (stream + 1)));
  return mix.next_u64();
}

std::uint64_t stream_id(const char* name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char* p = name; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace zenn
