// harnack_cli --config run.json [--out dir] [--seed n] [--quiet]
// Exit codes: 0 pass, 1 violation, 2 usage/config error, 3 inconclusive.

#include <CLI11.hpp>

#include <iostream>

#include "harnack/catalog.hpp"
#include "harnack/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Differential Harnack inequality checks"};
  std::string config;
  harnack::RunContext ctx;
  std::uint64_t seed = 0;
  bool list = false;
  app.add_option("--config", config, "JSON run config")->check(CLI::ExistingFile);
  app.add_option("--out", ctx.out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_flag("--quiet", ctx.quiet, "no summary lines on stdout");
  app.add_flag("--list", list, "print the catalog ids and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : harnack::kExitUsage;
  }
  if (list) {
    for (const auto& id : harnack::catalog_ids()) std::cout << id << '\n';
    return 0;
  }
  if (config.empty()) {
    std::cerr << "--config is required\n" << app.help();
    return harnack::kExitUsage;
  }
  if (seed_opt->count() > 0) ctx.seed = seed;
  return harnack::run_config_file(config, ctx);
}
