// Command-line front end for the osclab shared library. Argument handling
// and config plumbing live here; all computation goes through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "osclab/osclab.h"

namespace {

int fail_usage(const std::string& msg) {
  std::fprintf(stderr, "osclab: %s\n", msg.c_str());
  return 1;
}

bool set_override(nlohmann::json& cfg, const std::string& spec, std::string& err) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    err = "override must look like key.path=value: " + spec;
    return false;
  }
  std::string path = spec.substr(0, eq), value = spec.substr(eq + 1);
  std::string pointer = "/";
  for (char c : path) pointer += (c == '.') ? '/' : c;
  nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  try {
    cfg[nlohmann::json::json_pointer(pointer)] = parsed;
  } catch (const nlohmann::json::exception& e) {
    err = std::string("bad override \"") + spec + "\": " + e.what();
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for an oscillatory hypersingular integral operator "
               "along radial hypersurfaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;
  std::vector<std::string> overrides;

  const std::vector<std::string> commands = {"profile-check", "lemma-check",      "multiplier",
                                             "decay",         "sobolev-envelope", "apply",
                                             "sweep"};
  const char* descriptions[] = {
      "certify the profile's growth-ratio constants",
      "grid checks of the phase derivative floor and patch classification",
      "multiplier lattice study with tolerance-refinement stability",
      "dyadic decay fits of the multiplier pieces",
      "one-sided large-frequency envelope of the multiplier",
      "spectral vs direct application of the truncated operator",
      "L^p ratio, dyadic L^1, and smoothing-ladder sweeps",
  };

  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i)
    subs.push_back(app.add_subcommand(commands[i], descriptions[i]));

  app.add_option("--config", config_path, "JSON run-config file (merged over defaults)");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides config)");
  app.add_option("--threads", threads, "worker threads (0 = all cores; overrides config)");
  app.add_option("--override", overrides, "config override key.path=value (repeatable)")
      ->take_all();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  seed_set = seed_opt->count() > 0;

  std::string command;
  for (std::size_t i = 0; i < commands.size(); ++i)
    if (subs[i]->parsed()) command = commands[i];

  nlohmann::json cfg = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in.good()) return fail_usage("cannot open config file: " + config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    cfg = nlohmann::json::parse(ss.str(), nullptr, false);
    if (cfg.is_discarded()) return fail_usage("config file is not valid JSON: " + config_path);
  }
  if (!out_dir.empty()) cfg["out"] = out_dir;
  if (seed_set) cfg["seed"] = seed;
  if (threads >= 0) cfg["threads"] = threads;
  for (const std::string& o : overrides) {
    std::string err;
    if (!set_override(cfg, o, err)) return fail_usage(err);
  }

  int exit_code = 1;
  char* summary = nullptr;
  osclab_status st = osclab_run_command(command.c_str(), cfg.dump().c_str(), &exit_code, &summary);
  if (st != OSCLAB_OK) {
    std::fprintf(stderr, "osclab %s: %s\n", command.c_str(), osclab_last_error());
    return st == OSCLAB_BUDGET_EXCEEDED ? 4 : 1;
  }
  if (summary) {
    std::printf("%s\n", summary);
    osclab_string_free(summary);
  }
  return exit_code;
}
