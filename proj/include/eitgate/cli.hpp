#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "eitgate/groupvel.hpp"
#include "eitgate/ladder.hpp"
#include "eitgate/observables.hpp"

namespace eitgate {

struct RunConfig {
  MSchemeParams scheme;
  double t_max = 1.0;
  std::size_t n_samples = 201;
  IntegratorSettings integrator;
  DephasingMode dephasing_mode = DephasingMode::Lindblad;
  std::size_t mc_samples = 2000;
  std::uint64_t seed = 42;
  PhysicalConstants constants;
  VgSettings vg;
  double t_int = 0.0;  // <= 0 resolves to t_max
  std::string vg_geometry = "transient";  // or "steady"
  LadderParams ladder;
  Amplitudes amplitudes = uniform_amplitudes();

  // Unknown keys and wrongly typed values throw ErrorCode::Config.
  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  bool is_numeric_key(const std::string& key) const;
  void set_numeric(const std::string& key, double value);
  void validate() const;
  double resolved_t_int() const { return t_int > 0.0 ? t_int : t_max; }
  GateSettings gate_settings() const;
};

RunConfig load_config(const std::filesystem::path& path);

// Fixed 17-significant-digit scientific format; "nan" for NaN.
std::string format_double(double v);

// Write to a temporary sibling, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& text);

std::string simulation_csv(const GateModel& model, const GateResult& result);
nlohmann::json simulation_summary(const RunConfig& cfg, const GateResult& r);

void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out);
void cmd_scan(const RunConfig& cfg, const std::string& param, double from,
              double to, std::size_t steps, const std::filesystem::path& out);
nlohmann::json cmd_groupvel(const RunConfig& cfg,
                            const std::filesystem::path& out);
void cmd_ladder(const RunConfig& cfg, const std::filesystem::path& out);
nlohmann::json cmd_perturbative(const RunConfig& cfg,
                                const std::filesystem::path& out);
nlohmann::json cmd_fringes(const std::filesystem::path& phase_file,
                           const std::filesystem::path& out);

// JSON text with a trailing newline; stable key order.
std::string dump_json(const nlohmann::json& j);

}  // namespace eitgate
