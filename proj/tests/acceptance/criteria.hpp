#pragma once

#include <string>

namespace acceptance {

struct CritResult {
  bool pass = false;
  std::string details;
};

// The ten checks the build is gated on, numbered as reported by the
// runner. Each prints nothing itself; the runner emits one line per
// criterion.
CritResult c1_gradient_exactness();
CritResult c2_zentk_identity();
CritResult c3_feature_probe();
CritResult c4_cumulant_additivity();
CritResult c5_gaussian_trap();
CritResult c6_charfn();
CritResult c7_pointwise_convergence();
CritResult c8_highfreq_1d();
CritResult c9_image_ordering();
CritResult c10_determinism();

// Shared helpers for the CLI-driven criteria.
struct CliRun {
  int exit_code = -1;
  std::string output;
};
CliRun run_cli_from_root(const std::string& args);
std::string slurp_file(const std::string& path);

}  // namespace acceptance
