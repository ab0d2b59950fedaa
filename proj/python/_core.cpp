#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hmf/analysis.hpp"
#include "hmf/checkpoint.hpp"
#include "hmf/config.hpp"
#include "hmf/dynamics.hpp"
#include "hmf/ensemble.hpp"
#include "hmf/equilibrium.hpp"
#include "hmf/error.hpp"
#include "hmf/perturbation.hpp"
#include "hmf/pipeline.hpp"
#include "hmf/theory.hpp"

namespace py = pybind11;
using namespace hmf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  auto r = a.unchecked<1>();
  std::vector<double> v(r.shape(0));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) v[i] = r(i);
  return v;
}

Array to_array(const std::vector<double>& v) {
  Array a(v.size());
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

// Read-only view of an ensemble column that keeps the ensemble alive.
Array view(std::span<const double> v, py::handle owner) {
  Array a({v.size()}, {sizeof(double)}, v.data(), owner);
  a.attr("flags").attr("writeable") = false;
  return a;
}

TimeSeries series_of(const Array& t, const Array& v) {
  TimeSeries s{to_vector(t), to_vector(v)};
  s.validate();
  return s;
}

py::tuple series_tuple(const TimeSeries& s) { return py::make_tuple(to_array(s.t), to_array(s.value)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "HMF weighted-particle Vlasov simulator and algebraic damping analysis.";
  m.attr("__version__") = HMF_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<DegenerateInitialization>(m, "DegenerateInitialization", base.ptr());
  py::register_exception<InvalidWindow>(m, "InvalidWindow", base.ptr());
  py::register_exception<InvalidFit>(m, "InvalidFit", base.ptr());
  py::register_exception<SeparatrixError>(m, "SeparatrixError", base.ptr());
  auto io = py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<CheckpointError>(m, "CheckpointError", io.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<StageError>(m, "StageError", base.ptr());

  // equilibrium
  py::class_<EquilibriumState>(m, "EquilibriumState")
      .def_readonly("temperature", &EquilibriumState::temperature)
      .def_readonly("beta", &EquilibriumState::beta)
      .def_readonly("m0", &EquilibriumState::m0)
      .def_readonly("omega0", &EquilibriumState::omega0)
      .def_readonly("norm", &EquilibriumState::norm)
      .def("density", [](const EquilibriumState& s, double x, double p) { return f0_density(x, p, s); })
      .def("__repr__", [](const EquilibriumState& s) {
        return "EquilibriumState(T=" + std::to_string(s.temperature) + ", m0=" + std::to_string(s.m0) + ")";
      });
  m.def("solve_m0", &solve_m0, py::arg("temperature"), py::arg("tolerance") = kDefaultEquilibriumTolerance);
  m.def("consistency_map", &consistency_map, py::arg("m"), py::arg("beta"),
        py::arg("nodes") = kConsistencyNodes);

  // ensemble
  py::class_<LatticeSpec>(m, "LatticeSpec")
      .def(py::init([](std::size_t nx, std::size_t np, double pmax) { return LatticeSpec{nx, np, pmax}; }),
           py::arg("nx"), py::arg("np"), py::arg("pmax") = 3.0)
      .def_readwrite("nx", &LatticeSpec::nx)
      .def_readwrite("np", &LatticeSpec::np)
      .def_readwrite("pmax", &LatticeSpec::pmax);

  py::enum_<PerturbationKind>(m, "PerturbationKind")
      .value("NONE", PerturbationKind::None)
      .value("COSINE", PerturbationKind::Cosine)
      .value("SINE", PerturbationKind::Sine);
  py::class_<PerturbationSpec>(m, "PerturbationSpec")
      .def(py::init([](PerturbationKind k, double a) { return PerturbationSpec{k, a}; }),
           py::arg("kind") = PerturbationKind::None, py::arg("amplitude") = 0.0)
      .def_readwrite("kind", &PerturbationSpec::kind)
      .def_readwrite("amplitude", &PerturbationSpec::amplitude);

  py::class_<WeightedEnsemble>(m, "WeightedEnsemble")
      .def("__len__", &WeightedEnsemble::size)
      .def_property_readonly("symmetry_reduced", &WeightedEnsemble::symmetry_reduced)
      .def_property_readonly("represented_size", &WeightedEnsemble::represented_size)
      .def_property_readonly("time", &WeightedEnsemble::time)
      .def_property_readonly("x", [](py::object self) { return view(self.cast<WeightedEnsemble&>().x(), self); })
      .def_property_readonly("p", [](py::object self) { return view(self.cast<WeightedEnsemble&>().p(), self); })
      .def_property_readonly("weights",
                             [](py::object self) { return view(self.cast<WeightedEnsemble&>().weights(), self); });

  m.def("init_lattice", &init_lattice, py::arg("lattice"), py::arg("density"),
        py::arg("symmetry_reduced") = false);
  m.def(
      "init_perturbed",
      [](const LatticeSpec& lattice, const EquilibriumState& eq, const PerturbationSpec& spec, bool reduced) {
        return init_lattice(lattice, perturbed_density(eq, spec), reduced);
      },
      py::arg("lattice"), py::arg("equilibrium"), py::arg("perturbation") = PerturbationSpec{},
      py::arg("symmetry_reduced") = false, py::call_guard<py::gil_scoped_release>(),
      "Lattice initialization of the (perturbed) thermal state, evaluated in C++.");
  m.def("magnetization", [](const WeightedEnsemble& e) {
    const auto s = magnetization(e);
    return py::make_tuple(s.mx, s.my);
  });
  m.def("casimirs", &casimirs, py::arg("ensemble"), py::arg("lmax") = 4);

  // dynamics
  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("t_end", &SimConfig::t_end)
      .def_readwrite("record_stride", &SimConfig::record_stride)
      .def_readwrite("use_symmetry", &SimConfig::use_symmetry)
      .def_readwrite("checkpoint_every", &SimConfig::checkpoint_every)
      .def_readwrite("checkpoint_path", &SimConfig::checkpoint_path);
  m.def("step", &step, py::arg("ensemble"), py::arg("dt"), py::call_guard<py::gil_scoped_release>());
  m.def("total_energy", &total_energy);
  m.def("total_momentum", &total_momentum);
  m.def(
      "run",
      [](WeightedEnsemble& e, const SimConfig& cfg) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(e, cfg);
        }
        py::dict out;
        std::vector<double> t, mx, my;
        for (const auto& s : r.series.samples) {
          t.push_back(s.t);
          mx.push_back(s.mx);
          my.push_back(s.my);
        }
        out["t"] = to_array(t);
        out["mx"] = to_array(mx);
        out["my"] = to_array(my);
        out["energy"] = to_array(r.conservation.energy);
        out["momentum"] = to_array(r.conservation.momentum);
        out["steps"] = r.steps;
        return out;
      },
      py::arg("ensemble"), py::arg("config"),
      "Advances to config.t_end; returns a dict of numpy arrays t, mx, my, energy, momentum.");
  m.def("write_checkpoint", &write_checkpoint);
  m.def("read_checkpoint", &read_checkpoint);

  // analysis
  m.def(
      "detrend_constant",
      [](const Array& t, const Array& v, double start) { return series_tuple(detrend_constant(series_of(t, v), start)); },
      py::arg("t"), py::arg("value"), py::arg("tail_start"));
  m.def(
      "detrend_running",
      [](const Array& t, const Array& v, double w) { return series_tuple(detrend_running(series_of(t, v), w)); },
      py::arg("t"), py::arg("value"), py::arg("half_window"));
  m.def(
      "envelope",
      [](const Array& t, const Array& v) {
        std::vector<double> et, ea;
        for (const auto& p : envelope(series_of(t, v))) {
          et.push_back(p.t);
          ea.push_back(p.amplitude);
        }
        return py::make_tuple(to_array(et), to_array(ea));
      },
      py::arg("t"), py::arg("value"));

  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("exponent", &PowerLawFit::exponent)
      .def_readonly("log_amplitude", &PowerLawFit::log_amplitude)
      .def_readonly("residual", &PowerLawFit::residual)
      .def_readonly("t_min", &PowerLawFit::t_min)
      .def_readonly("t_max", &PowerLawFit::t_max)
      .def_readonly("points", &PowerLawFit::points);
  m.def(
      "fit_power_law",
      [](const Array& t, const Array& a, double t_min, double t_max) {
        const auto tv = to_vector(t), av = to_vector(a);
        if (tv.size() != av.size()) throw InvalidParameter("t and amplitude differ in length");
        std::vector<EnvelopePoint> env(tv.size());
        for (std::size_t i = 0; i < tv.size(); ++i) env[i] = {tv[i], av[i]};
        return fit_power_law(env, t_min, t_max);
      },
      py::arg("t"), py::arg("amplitude"), py::arg("t_min"), py::arg("t_max"));
  m.def(
      "power_spectrum",
      [](const Array& t, const Array& v, double t0, double t1, std::size_t oversample) {
        const Spectrum sp = power_spectrum(series_of(t, v), t0, t1, oversample);
        return py::make_tuple(to_array(sp.omega), to_array(sp.power));
      },
      py::arg("t"), py::arg("value"), py::arg("t0"), py::arg("t1"), py::arg("oversample") = kDefaultOversample);
  m.def(
      "peak_frequency",
      [](const Array& omega, const Array& power, double lo, double hi) {
        Spectrum sp;
        sp.omega = to_vector(omega);
        sp.power = to_vector(power);
        const auto pk = peak_frequency(sp, lo, hi);
        return py::make_tuple(pk.omega, pk.power);
      },
      py::arg("omega"), py::arg("power"), py::arg("omega_min"), py::arg("omega_max"));

  // theory
  py::enum_<OrbitRegime>(m, "OrbitRegime")
      .value("LIBRATION", OrbitRegime::Libration)
      .value("ROTATION", OrbitRegime::Rotation);
  py::enum_<AngleBasis>(m, "AngleBasis").value("COS", AngleBasis::Cos).value("SIN", AngleBasis::Sin);
  py::enum_<Component>(m, "Component").value("MX", Component::Mx).value("MY", Component::My);
  py::class_<PendulumOrbit>(m, "PendulumOrbit")
      .def_readonly("energy", &PendulumOrbit::energy)
      .def_readonly("m0", &PendulumOrbit::m0)
      .def_readonly("regime", &PendulumOrbit::regime)
      .def_readonly("action", &PendulumOrbit::action)
      .def_readonly("period", &PendulumOrbit::period)
      .def_readonly("frequency", &PendulumOrbit::frequency);
  m.def("orbit_from_energy", &orbit_from_energy, py::arg("energy"), py::arg("m0"));
  m.def("orbit_from_action", &orbit_from_action, py::arg("action"), py::arg("m0"),
        py::arg("regime") = OrbitRegime::Libration);
  m.def("separatrix_action", &separatrix_action, py::arg("m0"));
  m.def("angle_fourier", &angle_fourier, py::arg("m"), py::arg("orbit"), py::arg("basis"),
        py::arg("samples") = kDefaultAngleSamples);
  m.def("small_action_slope", &small_action_slope, py::arg("m"), py::arg("basis"), py::arg("m0"),
        py::arg("lo_fraction") = 1e-4, py::arg("hi_fraction") = 1e-2, py::arg("points") = 9);
  py::class_<DecayPrediction>(m, "DecayPrediction")
      .def_readonly("observable", &DecayPrediction::observable)
      .def_readonly("harmonic", &DecayPrediction::harmonic)
      .def_readonly("singularity_index", &DecayPrediction::singularity_index)
      .def_readonly("exponent", &DecayPrediction::exponent)
      .def_readonly("frequency", &DecayPrediction::frequency);
  m.def("predict_decay", &predict_decay, py::arg("observable"), py::arg("m0"));

  // configuration and pipeline
  m.def("serialize_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
        py::arg("text"), "Parses config text and writes it back in canonical form.");
  m.def(
      "run_pipeline",
      [](const std::string& text) {
        PipelineOutcome out;
        {
          py::gil_scoped_release release;
          out = run_pipeline(parse_config(text));
        }
        py::dict d;
        d["directory"] = out.directory;
        d["fit_report"] = format_fit_report(out.observables);
        d["energy_drift"] = out.simulation.conservation.energy_drift;
        d["ok"] = out.simulation.conservation.ok();
        return d;
      },
      py::arg("config_text"));
}
