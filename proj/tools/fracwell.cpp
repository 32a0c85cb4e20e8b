#include <CLI11.hpp>
#include <iostream>

#include "fracwell/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fracwell: potential-well solver for a fractional magnetic pseudo-parabolic equation"};
  app.require_subcommand(1);

  fracwell::CliOptions opts;
  std::string config, out, trace;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config, "flat key=value configuration file");
    if (config_required) c->required();
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->add_flag("--deterministic", opts.deterministic, "serial kernels, byte-identical output");
  };
  add_common(app.add_subcommand("simulate", "evolve the initial data and write trace.csv and report.txt"), true);
  add_common(app.add_subcommand("wells", "estimate the well constants and write d_curve.csv"), true);
  add_common(app.add_subcommand("groundstate", "minimize J on the Nehari set and write u_star.txt"), true);
  auto* analyze = app.add_subcommand("analyze", "decay, blowup and invariance verdicts for a trace CSV");
  add_common(analyze, true);
  analyze->add_option("--trace", trace, "trace CSV written by simulate")->required();
  add_common(app.add_subcommand("verify", "run the built-in property checks"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fracwell::kExitConfig;
  }

  opts.subcommand = app.get_subcommands().front()->get_name();
  if (!config.empty()) opts.config = config;
  if (!out.empty()) opts.out = out;
  if (!trace.empty()) opts.trace = trace;
  return fracwell::run_cli(opts, std::cout, std::cerr);
}
