#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdte/cli.hpp"
#include "fdte/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fdte: fractional diffusion-type equations and time-changed "
               "stable processes"};
  app.set_version_flag("--version", std::string(fdte::kVersion));
  app.require_subcommand(1);

  fdte::cli::RunOptions options;
  std::uint64_t seed = 0;
  std::string out;
  int workers = 0;

  for (const char* name :
       {"density", "charfn", "simulate", "solve", "moments", "tails", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", options.config_path, "JSON configuration file")
        ->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out, "output CSV path (overrides the config)");
    sub->add_option("--workers", workers,
                    "Monte Carlo worker streams (or FDTE_THREADS)");
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  options.command = sub->get_name();
  if (sub->count("--seed")) options.seed = seed;
  if (!out.empty()) options.out = out;
  if (workers > 0) options.workers = workers;

  return fdte::cli::run(options, std::cerr);
}
