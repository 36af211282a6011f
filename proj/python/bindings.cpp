#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlskdv/config.hpp"
#include "nlskdv/error.hpp"
#include "nlskdv/evolve.hpp"
#include "nlskdv/exact.hpp"
#include "nlskdv/functionals.hpp"
#include "nlskdv/minimize.hpp"
#include "nlskdv/rearrange.hpp"
#include "nlskdv/workflows.hpp"

namespace py = pybind11;
using namespace nlskdv;

namespace {

py::array_t<double> to_numpy(const RealField& f) {
  return py::array_t<double>(f.values.size(), f.values.data());
}

py::array_t<cdouble> to_numpy(const ComplexField& f) {
  return py::array_t<cdouble>(f.values.size(), f.values.data());
}

py::array_t<double> x_of(const Grid1D& g) {
  py::array_t<double> x(g.size());
  auto m = x.mutable_unchecked<1>();
  for (int j = 0; j < g.size(); ++j) m(j) = g.x(j);
  return x;
}

RealField real_field(const GridPtr& grid, py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 1 || a.shape(0) != grid->size()) {
    throw ValidationError("expected a 1-D array of length " + std::to_string(grid->size()));
  }
  return RealField(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

ComplexField complex_field(const GridPtr& grid,
                           py::array_t<cdouble, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 1 || a.shape(0) != grid->size()) {
    throw ValidationError("expected a 1-D array of length " + std::to_string(grid->size()));
  }
  return ComplexField(grid, std::vector<cdouble>(a.data(), a.data() + a.size()));
}

py::dict pair_dict(const SolitaryWavePair& p) {
  py::dict d;
  d["x"] = x_of(*p.phi.grid);
  d["phi"] = to_numpy(p.phi);
  d["psi"] = to_numpy(p.psi);
  d["sigma"] = p.sigma;
  d["c"] = p.c;
  d["s"] = p.s;
  d["t"] = p.t;
  d["energy"] = p.energy_value;
  d["el_residual_phi"] = p.el_residual_phi;
  d["el_residual_psi"] = p.el_residual_psi;
  d["boundary_leak"] = p.boundary_leak;
  d["phi_positive"] = p.phi_positive;
  d["psi_positive"] = p.psi_positive;
  return d;
}

MinimizeOptions options(double tol, int max_iter) {
  MinimizeOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Solitary waves of the coupled NLS-KdV system";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<IoError> io_error(m, "IoError", PyExc_OSError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const IoError& e) {
      py::set_error(io_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    }
  });

  py::class_<PhysParams>(m, "Params")
      .def(py::init([](double alpha, double tau1, double tau2, const std::string& p, double q) {
             return PhysParams(alpha, tau1, tau2, Rational::parse(p), q);
           }),
           py::arg("alpha") = 1.0, py::arg("tau1") = 1.0, py::arg("tau2") = 1.0,
           py::arg("p") = "1", py::arg("q") = 1.0)
      .def_property_readonly("alpha", &PhysParams::alpha)
      .def_property_readonly("tau1", &PhysParams::tau1)
      .def_property_readonly("tau2", &PhysParams::tau2)
      .def_property_readonly("p", [](const PhysParams& p) { return p.p().str(); })
      .def_property_readonly("q", &PhysParams::q)
      .def_property_readonly("beta1", &PhysParams::beta1)
      .def_property_readonly("beta2", &PhysParams::beta2)
      .def("__repr__", [](const PhysParams& p) {
        return "Params(alpha=" + std::to_string(p.alpha()) + ", tau1=" + std::to_string(p.tau1()) +
               ", tau2=" + std::to_string(p.tau2()) + ", p=" + p.p().str() +
               ", q=" + std::to_string(p.q()) + ")";
      });

  m.def("grid_x", [](double L, int n) { return x_of(*make_grid(L, n)); }, py::arg("L"), py::arg("n"));

  m.def(
      "minimize_I",
      [](double s, double t, const PhysParams& prm, double L, int n, double tol, int max_iter) {
        std::pair<SolitaryWavePair, MinimizeReport> res;
        {
          py::gil_scoped_release release;
          res = minimize_I(s, t, prm, make_grid(L, n), options(tol, max_iter));
        }
        const auto& [pair, rep] = res;
        auto d = pair_dict(pair);
        d["iterations"] = rep.iterations;
        d["stages"] = rep.stages;
        return d;
      },
      py::arg("s"), py::arg("t"), py::arg("params") = PhysParams(), py::arg("L") = 40.0,
      py::arg("n") = 1024, py::arg("tol") = 1e-8, py::arg("max_iter") = 200000,
      "Minimize E subject to ||phi||^2 = s, ||psi||^2 = t. Returns a dict of arrays and diagnostics.");

  m.def(
      "minimize_W",
      [](double s, double t, const PhysParams& prm, double L, int n, double tol) {
        WSolution w;
        {
          py::gil_scoped_release release;
          w = minimize_W(s, t, prm, make_grid(L, n), options(tol, 200000));
        }
        py::dict d;
        d["x"] = x_of(*w.Phi.grid);
        d["Phi"] = to_numpy(w.Phi);
        d["psi"] = to_numpy(w.psi);
        d["a_star"] = w.a_star;
        d["b"] = w.b;
        d["sigma"] = w.sigma;
        d["omega"] = w.omega;
        d["c"] = w.c;
        d["I"] = w.I_value;
        d["W"] = w.W_value;
        d["boundary_minimum"] = w.boundary_minimum;
        return d;
      },
      py::arg("s"), py::arg("t"), py::arg("params") = PhysParams(), py::arg("L") = 40.0,
      py::arg("n") = 1024, py::arg("tol") = 1e-8);

  m.def(
      "energy",
      [](py::array_t<cdouble> u, py::array_t<double> v, const PhysParams& prm, double L) {
        const auto grid = make_grid(L, static_cast<int>(v.size()));
        return energy(complex_field(grid, u), real_field(grid, v), prm);
      },
      py::arg("u"), py::arg("v"), py::arg("params"), py::arg("L"));

  m.def(
      "conserved",
      [](py::array_t<cdouble> u, py::array_t<double> v, const PhysParams& prm, double L) {
        const auto grid = make_grid(L, static_cast<int>(v.size()));
        const auto c = conserved(complex_field(grid, u), real_field(grid, v), prm);
        return py::dict(py::arg("E") = c.E, py::arg("G") = c.G, py::arg("H") = c.H);
      },
      py::arg("u"), py::arg("v"), py::arg("params"), py::arg("L"));

  m.def(
      "kdv_ground",
      [](double t, const PhysParams& prm, double L, int n) { return to_numpy(kdv_ground(t, prm, make_grid(L, n))); },
      py::arg("t"), py::arg("params"), py::arg("L") = 40.0, py::arg("n") = 1024);
  m.def(
      "nls_ground",
      [](double s, const PhysParams& prm, double L, int n) { return to_numpy(nls_ground(s, prm, make_grid(L, n))); },
      py::arg("s"), py::arg("params"), py::arg("L") = 40.0, py::arg("n") = 1024);

  m.def(
      "rearrange",
      [](py::array_t<double> w, double L) {
        const auto grid = make_grid(L, static_cast<int>(w.size()));
        return to_numpy(decreasing_rearrangement(real_field(grid, w)));
      },
      py::arg("w"), py::arg("L"), "Symmetric decreasing rearrangement centred at x = 0.");

  m.def(
      "evolve",
      [](py::array_t<cdouble> u, py::array_t<double> v, const PhysParams& prm, double L, double T,
         double dt, int sample_every, double eps, std::uint64_t seed) {
        const auto grid = make_grid(L, static_cast<int>(v.size()));
        EvolveState init{complex_field(grid, u), real_field(grid, v), 0.0, prm};
        EvolveTrace tr;
        {
          py::gil_scoped_release release;
          const ReferenceOrbit ref(init.u, init.v);
          const auto start = eps > 0 ? perturb(init, eps * y_norm(init.u, init.v), seed) : init;
          tr = evolve(start, T, dt, sample_every, &ref);
        }
        std::vector<double> E, G, H;
        for (const auto& c : tr.conserved) {
          E.push_back(c.E);
          G.push_back(c.G);
          H.push_back(c.H);
        }
        py::dict d;
        d["time"] = tr.times;
        d["E"] = E;
        d["G"] = G;
        d["H"] = H;
        d["distance"] = tr.distance;
        d["status"] = tr.status;
        d["u"] = to_numpy(tr.final_state.u);
        d["v"] = to_numpy(tr.final_state.v);
        return d;
      },
      py::arg("u"), py::arg("v"), py::arg("params"), py::arg("L"), py::arg("T"), py::arg("dt"),
      py::arg("sample_every") = 100, py::arg("eps") = 0.0, py::arg("seed") = 1,
      "Evolve (u, v); distances are to the orbit of the initial state. eps is relative to its Y-norm.");

  m.def(
      "solitary_initial",
      [](py::array_t<double> phi, py::array_t<double> psi, double c, double sigma, const PhysParams& prm,
         double L) {
        const auto grid = make_grid(L, static_cast<int>(psi.size()));
        SolitaryWavePair pair;
        pair.phi = ComplexField(real_field(grid, phi));
        pair.psi = real_field(grid, psi);
        pair.sigma = sigma;
        pair.c = c;
        const auto st = solitary_initial(pair, c, sigma + c * c / 4, prm);
        return py::make_tuple(to_numpy(st.u), to_numpy(st.v));
      },
      py::arg("phi"), py::arg("psi"), py::arg("c"), py::arg("sigma"), py::arg("params"), py::arg("L"),
      "u = exp(i c x / 2) phi, v = psi.");

  m.def(
      "run",
      [](const std::string& command, const std::string& config_path, const std::map<std::string, std::string>& set,
         const std::string& init) -> py::tuple {
        std::ostringstream log, err;
        RunConfig cfg;
        try {
          if (!config_path.empty()) cfg = RunConfig::from_ini(config_path);
          for (const auto& [key, value] : set) {
            const auto dot = key.find('.');
            if (dot == std::string::npos) throw ValidationError("expected section.key, got " + key);
            cfg.set(key.substr(0, dot), key.substr(dot + 1), value);
          }
        } catch (const Error& e) {
          const nlohmann::json j{{"command", command}, {"kind", to_string(e.kind())},
                                 {"message", e.what()}, {"exit_code", e.exit_code()}};
          return py::make_tuple(e.exit_code(), std::string(), j.dump());
        }
        int code = 0;
        {
          py::gil_scoped_release release;
          if (command == "solve") code = cli::cmd_solve(cfg, log, err);
          else if (command == "sweep") code = cli::cmd_sweep(cfg, log, err);
          else if (command == "w-solve") code = cli::cmd_w_solve(cfg, log, err);
          else if (command == "evolve") code = cli::cmd_evolve(cfg, init, log, err);
          else if (command == "rearrange") code = cli::cmd_rearrange(cfg, log, err);
          else if (command == "verify") code = cli::cmd_verify(cfg, log, err);
          else throw ValidationError("unknown command " + command);
        }
        return py::make_tuple(static_cast<int>(code), log.str(), err.str());
      },
      py::arg("command"), py::arg("config") = "", py::arg("set") = std::map<std::string, std::string>{},
      py::arg("init") = "", "Run a CLI workflow; returns (exit_code, log, errors).");
}
