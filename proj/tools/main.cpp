#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "commands.hpp"
#include "zenn/train.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  bool timing = false;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_timing) {
  sub->add_option("config", args.config_path, "experiment config file (JSON)")->required();
  sub->add_option("--set", args.overrides,
                  "override a scalar config field, e.g. --set train.epochs=100");
  if (with_timing)
    sub->add_flag("--timing", args.timing,
                  "record wall times in the metrics CSV (off by default so outputs are "
                  "byte-stable across runs)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zenn: frequency-scaled networks, their tangent kernel, and width asymptotics"};
  app.require_subcommand(1);

  CommonArgs train_args, image_args, zentk_args, cumulants_args, charfn_args, converge_args,
      synth_args;
  add_common(app.add_subcommand("train", "train a shallow model on a 1d task"), train_args, true);
  add_common(app.add_subcommand("image-regress", "train an image-regression model on a PPM"),
             image_args, true);
  add_common(app.add_subcommand("zentk", "tangent-kernel Gram matrix, spectrum and loss bound"),
             zentk_args, false);
  add_common(app.add_subcommand("cumulants", "network cumulants: series vs Monte Carlo"),
             cumulants_args, false);
  add_common(app.add_subcommand("charfn", "characteristic function: closed form vs Monte Carlo"),
             charfn_args, false);
  add_common(app.add_subcommand("converge", "width-doubling sup-difference decay"), converge_args,
             false);
  add_common(app.add_subcommand("synth1d", "emit the synthetic 1d dataset as CSV"), synth_args,
             false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("train")) {
      zenncli::json cfg = zenncli::load_config(train_args.config_path, train_args.overrides);
      return zenncli::cmd_train(cfg, train_args.timing);
    }
    if (app.got_subcommand("image-regress")) {
      zenncli::json cfg = zenncli::load_config(image_args.config_path, image_args.overrides);
      return zenncli::cmd_image_regress(cfg, image_args.timing);
    }
    if (app.got_subcommand("zentk")) {
      zenncli::json cfg = zenncli::load_config(zentk_args.config_path, zentk_args.overrides);
      return zenncli::cmd_zentk(cfg);
    }
    if (app.got_subcommand("cumulants")) {
      zenncli::json cfg =
          zenncli::load_config(cumulants_args.config_path, cumulants_args.overrides);
      return zenncli::cmd_cumulants(cfg);
    }
    if (app.got_subcommand("charfn")) {
      zenncli::json cfg = zenncli::load_config(charfn_args.config_path, charfn_args.overrides);
      return zenncli::cmd_charfn(cfg);
    }
    if (app.got_subcommand("converge")) {
      zenncli::json cfg = zenncli::load_config(converge_args.config_path, converge_args.overrides);
      return zenncli::cmd_converge(cfg);
    }
    if (app.got_subcommand("synth1d")) {
      zenncli::json cfg = zenncli::load_config(synth_args.config_path, synth_args.overrides);
      return zenncli::cmd_synth1d(cfg);
    }
  } catch (const zenncli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const zenn::DivergenceError& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  }
  return 0;
}
