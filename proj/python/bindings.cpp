#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eitgate/cli.hpp"
#include "eitgate/groupvel.hpp"
#include "eitgate/interferometer.hpp"
#include "eitgate/ladder.hpp"
#include "eitgate/observables.hpp"
#include "eitgate/perturbative.hpp"

namespace py = pybind11;
using namespace eitgate;

namespace {

py::dict gate_dict(const GateModel& model, const GateResult& r) {
  const auto& m = r.metrics;
  const auto crossing = first_pi_crossing(r.phases, m);
  py::dict pi;
  pi["found"] = crossing.found;
  pi["time"] = crossing.time;
  pi["cps"] = crossing.cps;
  pi["fidelity"] = crossing.fidelity;
  pi["cond_fidelity"] = crossing.cond_fidelity;
  pi["p_success"] = crossing.p_success;

  Eigen::MatrixXd pops(static_cast<Eigen::Index>(m.times.size()),
                       static_cast<Eigen::Index>(model.names.size()));
  for (std::size_t k = 0; k < m.times.size(); ++k)
    pops.row(static_cast<Eigen::Index>(k)) = m.populations[k].transpose();

  py::dict d;
  d["time"] = m.times;
  d["phi01"] = r.phases.phi01;
  d["phi10"] = r.phases.phi10;
  d["phi11"] = r.phases.phi11;
  d["cps"] = r.phases.cps;
  d["fidelity"] = m.fidelity;
  d["cond_fidelity"] = m.cond_fidelity;
  d["p_success"] = m.p_success;
  d["populations"] = pops;
  d["state_names"] = model.names;
  d["pi_crossing"] = pi;
  return d;
}

GateSettings settings(std::size_t mc_samples, std::uint64_t seed,
                      const std::string& method) {
  GateSettings s;
  s.mc_samples = mc_samples;
  s.seed = seed;
  if (method == "adaptive-rk") {
    s.integrator.method = IntegrationMethod::AdaptiveRk;
  } else if (method != "exponential") {
    throw Error(ErrorCode::Config, "method must be exponential or adaptive-rk");
  }
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "EIT two-qubit phase gate simulator";

  static py::exception<Error> error(m, "EitgateError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg =
          std::string(error_code_name(e.code())) + ": " + e.what();
      py::object exc = py::reinterpret_borrow<py::object>(error)(msg);
      exc.attr("code") = error_code_name(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<MSchemeParams>(m, "MSchemeParams")
      .def(py::init<>())
      .def_readwrite("n_atoms", &MSchemeParams::n_atoms)
      .def_readwrite("g_p", &MSchemeParams::g_p)
      .def_readwrite("g_t", &MSchemeParams::g_t)
      .def_readwrite("omega1", &MSchemeParams::omega1)
      .def_readwrite("omega4", &MSchemeParams::omega4)
      .def_readwrite("delta2", &MSchemeParams::delta2)
      .def_readwrite("delta3", &MSchemeParams::delta3)
      .def_readwrite("eps12", &MSchemeParams::eps12)
      .def_readwrite("eps34", &MSchemeParams::eps34)
      .def_readwrite("gamma21", &MSchemeParams::gamma21)
      .def_readwrite("gamma23", &MSchemeParams::gamma23)
      .def_readwrite("gamma25", &MSchemeParams::gamma25)
      .def_readwrite("gamma41", &MSchemeParams::gamma41)
      .def_readwrite("gamma43", &MSchemeParams::gamma43)
      .def_readwrite("gamma45", &MSchemeParams::gamma45)
      .def_readwrite("deph1", &MSchemeParams::deph1)
      .def_readwrite("deph2", &MSchemeParams::deph2)
      .def_readwrite("deph4", &MSchemeParams::deph4)
      .def_readwrite("deph5", &MSchemeParams::deph5)
      .def_readwrite("gamma_si", &MSchemeParams::gamma_si)
      .def("validate", &MSchemeParams::validate);

  py::class_<LadderParams>(m, "LadderParams")
      .def(py::init<>())
      .def_readwrite("n_atoms", &LadderParams::n_atoms)
      .def_readwrite("g_p", &LadderParams::g_p)
      .def_readwrite("g_t", &LadderParams::g_t)
      .def_readwrite("delta_p", &LadderParams::delta_p)
      .def_readwrite("delta_t", &LadderParams::delta_t)
      .def_readwrite("gamma21", &LadderParams::gamma21)
      .def_readwrite("gamma32", &LadderParams::gamma32)
      .def_readwrite("n_max", &LadderParams::n_max);

  m.def("basis_names", [] {
    std::vector<std::string> out;
    for (const auto& s : enumerate_m_basis())
      out.push_back(to_string(s.atom) + "_" + std::to_string(s.n_p) +
                    std::to_string(s.n_t));
    return out;
  });
  m.def("build_hamiltonian", &build_hamiltonian, py::arg("params"));
  m.def(
      "build_jump_channels",
      [](const MSchemeParams& p) {
        py::list out;
        for (const auto& ch : build_jump_channels(p)) {
          out.append(py::make_tuple(
              ch.rate, ch.op,
              ch.kind == ChannelKind::Decay ? "decay" : "dephasing"));
        }
        return out;
      },
      py::arg("params"));

  m.def(
      "simulate",
      [](const MSchemeParams& p, double t_max, std::size_t n_samples,
         std::size_t mc_samples, std::uint64_t seed, const std::string& method) {
        const auto times = uniform_grid(t_max, n_samples);
        const auto model = m_scheme_model(p);
        GateResult r;
        {
          py::gil_scoped_release release;
          r = analyze_gate(model, times, settings(mc_samples, seed, method));
        }
        return gate_dict(model, r);
      },
      py::arg("params"), py::arg("t_max"), py::arg("n_samples") = 201,
      py::arg("mc_samples") = 2000, py::arg("seed") = 42,
      py::arg("method") = "exponential");

  m.def(
      "ladder",
      [](const LadderParams& p, double t_max, std::size_t n_samples,
         std::size_t mc_samples, std::uint64_t seed) {
        const auto times = uniform_grid(t_max, n_samples);
        const auto model = build_ladder_model(p);
        LadderResult r;
        {
          py::gil_scoped_release release;
          r = ladder_metrics(p, times, settings(mc_samples, seed, "exponential"));
        }
        auto d = gate_dict(model, r.gate);
        d["max_edge_population"] = r.max_edge_population;
        return d;
      },
      py::arg("params"), py::arg("t_max"), py::arg("n_samples") = 201,
      py::arg("mc_samples") = 2000, py::arg("seed") = 42);

  m.def(
      "cps_perturbative",
      [](const MSchemeParams& p, double t) { return cps_perturbative(p, t).phi; },
      py::arg("params"), py::arg("t_int"));
  m.def(
      "cps_eigenvalue",
      [](const MSchemeParams& p, double t) { return cps_eigenvalue(p, t).phi; },
      py::arg("params"), py::arg("t_int"));
  m.def("dark_eigenvalue", &dark_eigenvalue, py::arg("h"),
        py::arg("bare_index"));

  m.def(
      "susceptibility",
      [](const MSchemeParams& p, double offset) {
        return susceptibility(p, PhysicalConstants{}, VgSettings{}, offset);
      },
      py::arg("params"), py::arg("offset") = 0.0);
  m.def(
      "group_velocity_steady",
      [](const MSchemeParams& p) {
        return group_velocity_steady(p, PhysicalConstants{}, VgSettings{});
      },
      py::arg("params"));
  m.def(
      "group_velocity_transient",
      [](const MSchemeParams& p, double t_int) {
        return group_velocity_transient(p, PhysicalConstants{}, VgSettings{},
                                        t_int)
            .mean;
      },
      py::arg("params"), py::arg("t_int"));
  m.def(
      "cell_geometry",
      [](const MSchemeParams& p, double v_g, double t_int) {
        const auto g = cell_geometry(p, PhysicalConstants{}, v_g, t_int);
        py::dict d;
        d["V"] = g.V;
        d["L"] = g.L;
        d["d"] = g.d;
        d["density"] = g.density;
        d["v_g"] = g.v_g;
        return d;
      },
      py::arg("params"), py::arg("v_g"), py::arg("t_int"));

  m.def(
      "coincidence_fock",
      [](double Phi, double phi00, double phi01, double phi10, double phi11,
         double phi_plus0) {
        const auto c =
            coincidence_fock({Phi, phi00, phi01, phi10, phi11, phi_plus0});
        return py::make_tuple(c.p1, c.p2);
      },
      py::arg("Phi"), py::arg("phi00") = 0.0, py::arg("phi01") = 0.0,
      py::arg("phi10") = 0.0, py::arg("phi11") = 0.0,
      py::arg("phi_plus0") = 0.0);
  m.def(
      "cps_from_fringes",
      [](const std::vector<double>& phi_a, const std::vector<double>& p_a,
         const std::vector<double>& phi_b, const std::vector<double>& p_b) {
        return cps_from_fringes(phi_a, p_a, phi_b, p_b).phi;
      },
      py::arg("phi_a"), py::arg("p_a"), py::arg("phi_b"), py::arg("p_b"));
  m.def("chsh_value", &chsh_value, py::arg("phi"));

  m.def(
      "run_simulate",
      [](const std::string& config_json, const std::string& out) {
        cmd_simulate(RunConfig::from_json(nlohmann::json::parse(config_json)),
                     out);
      },
      py::arg("config_json"), py::arg("out"));
}
