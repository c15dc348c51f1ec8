#pragma once

// Config-driven commands behind harnack_cli. A config is one JSON object;
// "command" selects verify-system, simulate, sharpness or eps-sweep. Every
// report echoes the resolved config (defaults filled in); wall-clock data
// goes to metadata.json so report.json is reproducible byte for byte.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "harnack/catalog.hpp"
#include "harnack/equations.hpp"
#include "harnack/pde_lab.hpp"
#include "harnack/system_check.hpp"

namespace harnack {

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitUsage = 2, kExitInconclusive = 3 };

// Config problems: missing/ill-typed fields, unknown ids, bad ranges.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunContext {
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;  // overrides the config's "seed"
  bool quiet = false;
};

struct CommandResult {
  int exit_code = kExitPass;
  nlohmann::json report;  // what report.json holds
};

// Each command validates its config, runs, writes files under ctx.out_dir
// (unless out_dir is empty) and returns the report. ConfigError and
// std::invalid_argument propagate; run_config maps them to kExitUsage.
CommandResult cmd_verify_system(const nlohmann::json& cfg, const RunContext& ctx);
CommandResult cmd_simulate(const nlohmann::json& cfg, const RunContext& ctx);
CommandResult cmd_sharpness(const nlohmann::json& cfg, const RunContext& ctx);
CommandResult cmd_eps_sweep(const nlohmann::json& cfg, const RunContext& ctx);

// Dispatch on cfg["command"]. Never throws; errors print to stderr and give 2.
int run_config(const nlohmann::json& cfg, const RunContext& ctx);
int run_config_file(const std::string& path, const RunContext& ctx);

// Parsing helpers shared with the Python bindings.
Equation parse_equation(const nlohmann::json& j);
CatalogParams parse_catalog_params(const nlohmann::json& j);
GridSpec parse_grid(const nlohmann::json& j);

nlohmann::json to_json(const SystemCheckReport& r);
nlohmann::json to_json(const BoundCheck& b);
// Rows t,f,margin_id,margin for every constraint of the report.
void write_margin_csv(const std::string& path, const SystemCheckReport& r);

}  // namespace harnack
