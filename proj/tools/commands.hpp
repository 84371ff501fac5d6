#pragma once

#include "config.hpp"

namespace zenncli {

// One experiment per invocation; every command is deterministic given its
// config and writes byte-stable artifacts.
int cmd_train(const json& cfg, bool timing);
int cmd_image_regress(const json& cfg, bool timing);
int cmd_zentk(const json& cfg);
int cmd_cumulants(const json& cfg);
int cmd_charfn(const json& cfg);
int cmd_converge(const json& cfg);
int cmd_synth1d(const json& cfg);

}  // namespace zenncli
