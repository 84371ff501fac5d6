// Acceptance suite: one pass/fail line per criterion. Run everything, or
// a single criterion with --only N (used by the ctest registration so the
// slow criteria can run in parallel).

#include <chrono>
#include <cstdio>
#include <cstring>

#include "criteria.hpp"

namespace {

struct Entry {
  int id;
  const char* name;
  acceptance::CritResult (*fn)();
};

const Entry kCriteria[] = {
    {1, "gradient exactness", acceptance::c1_gradient_exactness},
    {2, "tangent-kernel identity", acceptance::c2_zentk_identity},
    {3, "feature-learning probe", acceptance::c3_feature_probe},
    {4, "cumulant additivity", acceptance::c4_cumulant_additivity},
    {5, "gaussian-trap contrast", acceptance::c5_gaussian_trap},
    {6, "characteristic function", acceptance::c6_charfn},
    {7, "pointwise convergence", acceptance::c7_pointwise_convergence},
    {8, "high-frequency 1d regression", acceptance::c8_highfreq_1d},
    {9, "image-regression ordering", acceptance::c9_image_ordering},
    {10, "determinism of CLI outputs", acceptance::c10_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
  }
  int failures = 0;
  for (const Entry& e : kCriteria) {
    if (only != 0 && e.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    acceptance::CritResult r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r.pass = false;
      r.details = std::string("exception: ") + ex.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d [%s]: %s (%s) [%.1fs]\n", e.id, e.name,
                r.pass ? "PASS" : "FAIL", r.details.c_str(), secs);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  return failures;
}
