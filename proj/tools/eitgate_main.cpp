#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eitgate/cli.hpp"

namespace {

eitgate::RunConfig resolve(const std::string& path,
                           const std::optional<std::uint64_t>& seed) {
  auto cfg = path.empty() ? eitgate::RunConfig{} : eitgate::load_config(path);
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EIT two-qubit phase gate simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string param;
  double from = 0.0, to = 0.0;
  std::size_t steps = 1;
  std::string phases_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat JSON configuration");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "Monte Carlo seed override");
  };

  auto* simulate = app.add_subcommand("simulate", "time series and summary");
  add_common(simulate);
  auto* scan = app.add_subcommand("scan", "sweep one numeric key");
  add_common(scan);
  scan->add_option("--param", param, "numeric configuration key")->required();
  scan->add_option("--from", from, "first value")->required();
  scan->add_option("--to", to, "last value")->required();
  scan->add_option("--steps", steps, "number of grid points")->required();
  auto* groupvel = app.add_subcommand("groupvel", "group velocity and cell");
  add_common(groupvel);
  auto* ladder = app.add_subcommand("ladder", "three-level ladder comparator");
  add_common(ladder);
  auto* perturbative =
      app.add_subcommand("perturbative", "fourth-order and eigenvalue CPS");
  add_common(perturbative);
  auto* fringes = app.add_subcommand("fringes", "coincidence fringe scan");
  fringes->add_option("--phases", phases_path, "JSON phase table")->required();
  fringes->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      eitgate::cmd_simulate(resolve(config_path, seed), out_dir);
    } else if (scan->parsed()) {
      eitgate::cmd_scan(resolve(config_path, seed), param, from, to, steps,
                        out_dir);
    } else if (groupvel->parsed()) {
      const bool write = groupvel->count("--out") > 0;
      std::cout << eitgate::dump_json(eitgate::cmd_groupvel(
          resolve(config_path, seed), write ? out_dir : std::string{}));
    } else if (ladder->parsed()) {
      eitgate::cmd_ladder(resolve(config_path, seed), out_dir);
    } else if (perturbative->parsed()) {
      const bool write = perturbative->count("--out") > 0;
      std::cout << eitgate::dump_json(eitgate::cmd_perturbative(
          resolve(config_path, seed), write ? out_dir : std::string{}));
    } else if (fringes->parsed()) {
      std::cout << eitgate::dump_json(
          eitgate::cmd_fringes(phases_path, out_dir));
    }
  } catch (const eitgate::Error& e) {
    std::fprintf(stderr, "%s: %s\n", eitgate::error_code_name(e.code()),
                 e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal_error: %s\n", e.what());
    return 1;
  }
  return 0;
}
