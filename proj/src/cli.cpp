#include "eitgate/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <unistd.h>

#include "eitgate/interferometer.hpp"
#include "eitgate/perturbative.hpp"

namespace eitgate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct NumericField {
  std::string key;
  bool integral;
  std::function<double(const RunConfig&)> get;
  std::function<void(RunConfig&, double)> set;
};

#define EG_DOUBLE(name, member)                              \
  NumericField {                                             \
    name, false, [](const RunConfig& c) { return c.member; }, \
        [](RunConfig& c, double v) { c.member = v; }          \
  }
#define EG_COUNT(name, member, type)                                      \
  NumericField {                                                          \
    name, true,                                                           \
        [](const RunConfig& c) { return static_cast<double>(c.member); }, \
        [](RunConfig& c, double v) { c.member = static_cast<type>(v); }   \
  }

const std::vector<NumericField>& numeric_fields() {
  static const std::vector<NumericField> fields{
      EG_DOUBLE("n_atoms", scheme.n_atoms),
      EG_DOUBLE("g_p", scheme.g_p),
      EG_DOUBLE("g_t", scheme.g_t),
      EG_DOUBLE("omega1", scheme.omega1),
      EG_DOUBLE("omega4", scheme.omega4),
      EG_DOUBLE("delta2", scheme.delta2),
      EG_DOUBLE("delta3", scheme.delta3),
      EG_DOUBLE("eps12", scheme.eps12),
      EG_DOUBLE("eps34", scheme.eps34),
      EG_DOUBLE("gamma_21", scheme.gamma21),
      EG_DOUBLE("gamma_23", scheme.gamma23),
      EG_DOUBLE("gamma_25", scheme.gamma25),
      EG_DOUBLE("gamma_41", scheme.gamma41),
      EG_DOUBLE("gamma_43", scheme.gamma43),
      EG_DOUBLE("gamma_45", scheme.gamma45),
      EG_DOUBLE("deph_1", scheme.deph1),
      EG_DOUBLE("deph_2", scheme.deph2),
      EG_DOUBLE("deph_4", scheme.deph4),
      EG_DOUBLE("deph_5", scheme.deph5),
      EG_DOUBLE("gamma_si", scheme.gamma_si),
      EG_DOUBLE("t_max", t_max),
      EG_COUNT("n_samples", n_samples, std::size_t),
      EG_DOUBLE("rel_tol", integrator.rel_tol),
      EG_DOUBLE("abs_tol", integrator.abs_tol),
      EG_DOUBLE("max_step", integrator.max_step),
      EG_COUNT("mc_samples", mc_samples, std::size_t),
      EG_COUNT("seed", seed, std::uint64_t),
      EG_DOUBLE("c", constants.c),
      EG_DOUBLE("hbar", constants.hbar),
      EG_DOUBLE("epsilon0", constants.epsilon0),
      EG_DOUBLE("omega_p", constants.omega_p),
      EG_DOUBLE("omega_t", constants.omega_t),
      EG_DOUBLE("mu_p", constants.mu_p),
      EG_DOUBLE("mu_t", constants.mu_t),
      EG_DOUBLE("probe_rabi_classical", vg.probe_rabi_classical),
      EG_DOUBLE("fd_step", vg.fd_step),
      EG_COUNT("avg_grid", vg.avg_grid, std::size_t),
      EG_DOUBLE("t_int", t_int),
      EG_DOUBLE("ladder_n_atoms", ladder.n_atoms),
      EG_DOUBLE("ladder_g_p", ladder.g_p),
      EG_DOUBLE("ladder_g_t", ladder.g_t),
      EG_DOUBLE("ladder_delta_p", ladder.delta_p),
      EG_DOUBLE("ladder_delta_t", ladder.delta_t),
      EG_DOUBLE("ladder_gamma_21", ladder.gamma21),
      EG_DOUBLE("ladder_gamma_32", ladder.gamma32),
      EG_COUNT("ladder_n_max", ladder.n_max, int),
  };
  return fields;
}

#undef EG_DOUBLE
#undef EG_COUNT

const NumericField* find_numeric(const std::string& key) {
  for (const auto& f : numeric_fields())
    if (f.key == key) return &f;
  return nullptr;
}

const char* kAmplitudeKeys[4] = {"c00", "c01", "c10", "c11"};

Error config_error(const std::string& what) {
  return Error(ErrorCode::Config, what);
}

std::string method_name(IntegrationMethod m) {
  return m == IntegrationMethod::Exponential ? "exponential" : "adaptive-rk";
}

std::string mode_name(DephasingMode m) {
  return m == DephasingMode::Lindblad ? "lindblad" : "excluded";
}

std::string convention_name(LadderConvention c) {
  return c == LadderConvention::AsPrinted ? "as-printed" : "absorptive";
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json crossing_json(const PiCrossing& c) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {{"found", c.found},
          {"time", nullable(c.found ? c.time : nan)},
          {"cps", nullable(c.found ? c.cps : nan)},
          {"fidelity", nullable(c.found ? c.fidelity : nan)},
          {"cond_fidelity", nullable(c.found ? c.cond_fidelity : nan)},
          {"p_success", nullable(c.found ? c.p_success : nan)},
          {"p_uniform", nullable(c.found ? c.p_uniform : nan)}};
}

json final_json(const GateResult& r) {
  const std::size_t k = r.metrics.times.size() - 1;
  const auto& m = r.metrics;
  return {{"time", m.times[k]},
          {"phi01", r.phases.phi01[k]},
          {"phi10", r.phases.phi10[k]},
          {"phi11", r.phases.phi11[k]},
          {"cps", r.phases.cps[k]},
          {"fidelity", m.fidelity[k]},
          {"cond_fidelity", m.cond_fidelity[k]},
          {"p_success", m.p_success[k]},
          {"p_uniform", m.p_uniform[k]},
          {"p_basis",
           {m.p_basis[0][k], m.p_basis[1][k], m.p_basis[2][k], m.p_basis[3][k]}}};
}

json geometry_json(const CellGeometry& g) {
  return {{"v_g", g.v_g}, {"L", g.L}, {"V", g.V}, {"d", g.d},
          {"density", g.density}};
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw config_error("configuration must be a JSON object");
  RunConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (find_numeric(key)) {
      if (!value.is_number()) throw config_error("key '" + key + "' must be a number");
      cfg.set_numeric(key, value.get<double>());
      continue;
    }
    auto text = [&]() {
      if (!value.is_string()) throw config_error("key '" + key + "' must be a string");
      return value.get<std::string>();
    };
    if (key == "method") {
      const auto s = text();
      if (s == "exponential") cfg.integrator.method = IntegrationMethod::Exponential;
      else if (s == "adaptive-rk") cfg.integrator.method = IntegrationMethod::AdaptiveRk;
      else throw config_error("method must be exponential or adaptive-rk");
    } else if (key == "dephasing_mode") {
      const auto s = text();
      if (s == "lindblad") cfg.dephasing_mode = DephasingMode::Lindblad;
      else if (s == "excluded") cfg.dephasing_mode = DephasingMode::Excluded;
      else throw config_error("dephasing_mode must be lindblad or excluded");
    } else if (key == "vg_geometry") {
      const auto s = text();
      if (s != "transient" && s != "steady") {
        throw config_error("vg_geometry must be transient or steady");
      }
      cfg.vg_geometry = s;
    } else if (key == "ladder_convention") {
      const auto s = text();
      if (s == "as-printed") cfg.ladder.convention = LadderConvention::AsPrinted;
      else if (s == "absorptive") cfg.ladder.convention = LadderConvention::Absorptive;
      else throw config_error("ladder_convention must be as-printed or absorptive");
    } else {
      int slot = -1;
      for (int q = 0; q < 4; ++q)
        if (key == kAmplitudeKeys[q]) slot = q;
      if (slot < 0) throw config_error("unknown key '" + key + "'");
      if (value.is_number()) {
        cfg.amplitudes[slot] = value.get<double>();
      } else if (value.is_array() && value.size() == 2 && value[0].is_number() &&
                 value[1].is_number()) {
        cfg.amplitudes[slot] = {value[0].get<double>(), value[1].get<double>()};
      } else {
        throw config_error("key '" + key + "' must be a number or [re, im]");
      }
    }
  }
  cfg.validate();
  return cfg;
}

json RunConfig::to_json() const {
  json j;
  for (const auto& f : numeric_fields()) {
    const double v = f.get(*this);
    if (f.integral) {
      j[f.key] = static_cast<std::uint64_t>(v);
    } else {
      j[f.key] = v;
    }
  }
  j["t_int"] = resolved_t_int();
  j["method"] = method_name(integrator.method);
  j["dephasing_mode"] = mode_name(dephasing_mode);
  j["vg_geometry"] = vg_geometry;
  j["ladder_convention"] = convention_name(ladder.convention);
  for (int q = 0; q < 4; ++q) {
    j[kAmplitudeKeys[q]] = {amplitudes[q].real(), amplitudes[q].imag()};
  }
  return j;
}

bool RunConfig::is_numeric_key(const std::string& key) const {
  return find_numeric(key) != nullptr;
}

void RunConfig::set_numeric(const std::string& key, double value) {
  const auto* f = find_numeric(key);
  if (!f) throw config_error("'" + key + "' is not a numeric configuration key");
  if (!std::isfinite(value)) throw config_error("key '" + key + "' must be finite");
  if (f->integral && (value < 0.0 || std::floor(value) != value ||
                      value > 9007199254740992.0)) {
    throw config_error("key '" + key + "' must be a non-negative integer");
  }
  f->set(*this, value);
}

void RunConfig::validate() const {
  try {
    scheme.validate();
    integrator.validate();
    constants.validate();
    vg.validate();
    ladder.validate();
  } catch (const Error& e) {
    throw config_error(e.what());
  }
  if (!(t_max > 0.0)) throw config_error("t_max must be positive");
  if (n_samples < 2) throw config_error("n_samples must be at least 2");
  if (mc_samples < 1) throw config_error("mc_samples must be at least 1");
}

GateSettings RunConfig::gate_settings() const {
  GateSettings s;
  s.integrator = integrator;
  s.dephasing_mode = dephasing_mode;
  s.mc_samples = mc_samples;
  s.seed = seed;
  s.amplitudes = amplitudes;
  return s;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }
  return RunConfig::from_json(j);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename onto " + path.string());
  }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

std::string simulation_csv(const GateModel& model, const GateResult& r) {
  std::ostringstream out;
  out << "time,phi01,phi10,phi11,cps,fidelity,cond_fidelity,p_success";
  for (const auto& name : model.names) out << ",pop_" << name;
  out << "\n";
  const auto& m = r.metrics;
  for (std::size_t k = 0; k < m.times.size(); ++k) {
    out << format_double(m.times[k]) << ',' << format_double(r.phases.phi01[k])
        << ',' << format_double(r.phases.phi10[k]) << ','
        << format_double(r.phases.phi11[k]) << ','
        << format_double(r.phases.cps[k]) << ',' << format_double(m.fidelity[k])
        << ',' << format_double(m.cond_fidelity[k]) << ','
        << format_double(m.p_success[k]);
    for (Eigen::Index i = 0; i < m.populations[k].size(); ++i) {
      out << ',' << format_double(m.populations[k](i));
    }
    out << "\n";
  }
  return out.str();
}

json simulation_summary(const RunConfig& cfg, const GateResult& r) {
  json s;
  s["config"] = cfg.to_json();
  s["derived"] = {{"delta1", cfg.scheme.delta1()},
                  {"delta4", cfg.scheme.delta4()},
                  {"g_p_sqrtN", cfg.scheme.gp_collective()},
                  {"g_t_sqrtN", cfg.scheme.gt_collective()}};
  s["final"] = final_json(r);
  s["pi_crossing"] = crossing_json(first_pi_crossing(r.phases, r.metrics));
  try {
    const auto eig = cps_eigenvalue(cfg.scheme, cfg.t_max);
    // exp(-iHt) turns an energy shift into a phase of opposite sign
    s["benchmark_cps_final"] = -eig.phi;
  } catch (const Error&) {
    s["benchmark_cps_final"] = nullptr;
  }
  return s;
}

void cmd_simulate(const RunConfig& cfg, const fs::path& out) {
  const auto times = uniform_grid(cfg.t_max, cfg.n_samples);
  const GateModel model = m_scheme_model(cfg.scheme);
  const GateResult r = analyze_gate(model, times, cfg.gate_settings());
  write_atomic(out / "timeseries.csv", simulation_csv(model, r));
  write_atomic(out / "summary.json", dump_json(simulation_summary(cfg, r)));
}

void cmd_scan(const RunConfig& cfg, const std::string& param, double from,
              double to, std::size_t steps, const fs::path& out) {
  if (!cfg.is_numeric_key(param)) {
    throw config_error("scan parameter '" + param + "' is not a numeric key");
  }
  if (steps < 1) throw config_error("steps must be at least 1");
  std::ostringstream csv;
  csv << param << ",pi_time,fidelity,cond_fidelity,status\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < steps; ++i) {
    const double value =
        steps == 1 ? from
                   : from + (to - from) * static_cast<double>(i) /
                                static_cast<double>(steps - 1);
    double t = nan, f = nan, fc = nan;
    std::string status = "ok";
    try {
      RunConfig point = cfg;
      point.set_numeric(param, value);
      point.validate();
      const auto times = uniform_grid(point.t_max, point.n_samples);
      const GateResult r = analyze_gate(m_scheme_model(point.scheme), times,
                                        point.gate_settings());
      const auto c = first_pi_crossing(r.phases, r.metrics);
      if (c.found) {
        t = c.time;
        f = c.fidelity;
        fc = c.cond_fidelity;
      } else {
        status = "no_crossing";
      }
    } catch (const Error& e) {
      status = error_code_name(e.code());
    }
    csv << format_double(value) << ',' << format_double(t) << ','
        << format_double(f) << ',' << format_double(fc) << ',' << status
        << "\n";
  }
  write_atomic(out / "scan.csv", csv.str());
}

json cmd_groupvel(const RunConfig& cfg, const fs::path& out) {
  const double t_int = cfg.resolved_t_int();
  const double v_steady =
      group_velocity_steady(cfg.scheme, cfg.constants, cfg.vg);
  const auto transient =
      group_velocity_transient(cfg.scheme, cfg.constants, cfg.vg, t_int);
  json j;
  j["t_int"] = t_int;
  j["v_g_steady"] = v_steady;
  j["v_g_transient"] = transient.mean;
  j["geometry_source"] = cfg.vg_geometry;
  if (cfg.scheme.g_p > 0.0) {
    const auto gs = cell_geometry(cfg.scheme, cfg.constants, v_steady, t_int);
    const auto gt =
        cell_geometry(cfg.scheme, cfg.constants, transient.mean, t_int);
    const auto& g = cfg.vg_geometry == "steady" ? gs : gt;
    j["L"] = g.L;
    j["V"] = g.V;
    j["d"] = g.d;
    j["density"] = g.density;
    j["geometry_steady"] = geometry_json(gs);
    j["geometry_transient"] = geometry_json(gt);
  } else {
    for (const char* k : {"L", "V", "d", "density"}) j[k] = nullptr;
  }
  if (!out.empty()) {
    std::ostringstream csv;
    csv << "offset,re_chi,im_chi\n";
    const double centre = -cfg.scheme.eps12;
    const double half = std::max({1.0, cfg.scheme.omega1, cfg.scheme.omega4});
    const int n = 201;
    for (int k = 0; k < n; ++k) {
      const double off = centre - half + 2.0 * half * k / (n - 1);
      const Complex chi = susceptibility(cfg.scheme, cfg.constants, cfg.vg, off);
      csv << format_double(off) << ',' << format_double(chi.real()) << ','
          << format_double(chi.imag()) << "\n";
    }
    write_atomic(out / "chi.csv", csv.str());
    write_atomic(out / "groupvel.json", dump_json(j));
  }
  return j;
}

void cmd_ladder(const RunConfig& cfg, const fs::path& out) {
  const auto times = uniform_grid(cfg.t_max, cfg.n_samples);
  const GateModel model = build_ladder_model(cfg.ladder);
  const LadderResult r = ladder_metrics(cfg.ladder, times, cfg.gate_settings());
  write_atomic(out / "timeseries.csv", simulation_csv(model, r.gate));
  json s;
  s["config"] = cfg.to_json();
  s["final"] = final_json(r.gate);
  s["pi_crossing"] =
      crossing_json(first_pi_crossing(r.gate.phases, r.gate.metrics));
  s["max_edge_population"] = r.max_edge_population;
  write_atomic(out / "summary.json", dump_json(s));
}

json cmd_perturbative(const RunConfig& cfg, const fs::path& out) {
  const double t = cfg.resolved_t_int();
  const auto pert = cps_perturbative(cfg.scheme, t);
  const auto eig = cps_eigenvalue(cfg.scheme, t);
  json j;
  j["t_int"] = t;
  j["phi_perturbative"] = pert.phi;
  j["phi_eigenvalue"] = eig.phi;
  j["relative_difference"] =
      nullable(std::abs(pert.phi - eig.phi) /
               std::max(std::abs(pert.phi), std::abs(eig.phi)));
  if (!out.empty()) write_atomic(out / "perturbative.json", dump_json(j));
  return j;
}

json cmd_fringes(const fs::path& phase_file, const fs::path& out) {
  std::ifstream in(phase_file);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + phase_file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error(phase_file.string() + ": " + e.what());
  }
  if (!j.is_object()) throw config_error("phase table must be a JSON object");
  FockPhaseSet set;
  const std::pair<const char*, double*> keys[] = {
      {"phi00", &set.phi00}, {"phi01", &set.phi01}, {"phi10", &set.phi10},
      {"phi11", &set.phi11}, {"phi_plus0", &set.phi_plus0}};
  for (const auto& [key, value] : j.items()) {
    double* slot = nullptr;
    for (const auto& [name, ptr] : keys)
      if (key == name) slot = ptr;
    if (!slot) throw config_error("unknown phase key '" + key + "'");
    if (!value.is_number()) throw config_error("phase '" + key + "' must be a number");
    *slot = value.get<double>();
  }
  const int n = 256;
  std::vector<double> phi(n), p1(n), p2(n);
  std::ostringstream csv;
  csv << "Phi,P_RB1,P_RB2\n";
  for (int k = 0; k < n; ++k) {
    FockPhaseSet s = set;
    s.Phi = 4.0 * kPi * k / n;
    const auto c = coincidence_fock(s);
    phi[k] = s.Phi;
    p1[k] = c.p1;
    p2[k] = c.p2;
    csv << format_double(s.Phi) << ',' << format_double(c.p1) << ','
        << format_double(c.p2) << "\n";
  }
  const double cps = set.phi11 - set.phi01 - set.phi10 + set.phi00;
  json res;
  res["cps"] = cps;
  res["chsh"] = chsh_value(cps);
  try {
    res["cps_recovered"] = cps_from_fringes(phi, p1, phi, p2).phi;
  } catch (const Error&) {
    res["cps_recovered"] = nullptr;  // flat fringe
  }
  write_atomic(out / "fringes.csv", csv.str());
  write_atomic(out / "fringes.json", dump_json(res));
  return res;
}

}  // namespace eitgate
