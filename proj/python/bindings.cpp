#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gradlab/collar.hpp"
#include "gradlab/disk_geometry.hpp"
#include "gradlab/harness.hpp"
#include "gradlab/log_potential.hpp"
#include "gradlab/measure.hpp"
#include "gradlab/torus.hpp"

namespace py = pybind11;
using namespace gradlab;

PYBIND11_MODULE(_gradlab, m) {
    m.doc() = "Logarithmic potentials, conformal disk geometry, torus/collar labs";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Vec2{x, y}; }))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("__repr__", [](const Vec2& v) {
            std::ostringstream s;
            s << "Vec2(" << v.x << ", " << v.y << ")";
            return s.str();
        });

    py::class_<Atom>(m, "Atom")
        .def(py::init([](double x, double y, double w) { return Atom{{x, y}, w}; }),
             py::arg("x"), py::arg("y"), py::arg("weight"))
        .def_readwrite("pos", &Atom::pos)
        .def_readwrite("weight", &Atom::weight);

    py::class_<SignedMeasure>(m, "SignedMeasure")
        .def(py::init([](const std::vector<std::tuple<double, double, double>>& atoms) {
                 std::vector<Atom> as;
                 for (const auto& [x, y, w] : atoms) as.push_back({{x, y}, w});
                 return SignedMeasure(std::move(as));
             }),
             py::arg("atoms"), "Atoms as (x, y, weight) triples")
        .def("atoms", &SignedMeasure::atoms)
        .def("is_atomic", &SignedMeasure::is_atomic)
        .def("empty", &SignedMeasure::empty);

    m.def("total_variation", &total_variation);
    m.def("total_mass", &total_mass);

    m.def("eval_potential", &eval_potential, py::arg("mu"), py::arg("x"));
    m.def("eval_potential",
          [](const SignedMeasure& mu, double x, double y) {
              return eval_potential(mu, {x, y});
          });
    m.def("eval_gradient",
          [](const SignedMeasure& mu, double x, double y) {
              const Vec2 g = eval_gradient(mu, {x, y});
              return std::make_pair(g.x, g.y);
          });
    m.def("scaling_functional",
          [](const SignedMeasure& mu, double x, double y, double r, double q) {
              return scaling_functional(mu, {x, y}, r, q);
          },
          py::arg("mu"), py::arg("x"), py::arg("y"), py::arg("r"), py::arg("q"));
    m.def("exp_integrability", &exp_integrability, py::arg("mu"), py::arg("R"), py::arg("eps"),
          py::arg("n") = 2048);

    m.def("blowup_T", &blowup_T, py::arg("theta"), py::arg("R"));
    m.def("blowup_area",
          [](double R, double a) {
              const BlowupArea b = blowup_area(R, a);
              return std::make_pair(b.closed, b.quadrature);
          },
          py::arg("R"), py::arg("a"), "Returns (closed, quadrature) area of Omega(R)");

    py::class_<Lattice>(m, "Lattice")
        .def_readonly("a", &Lattice::a)
        .def_readonly("b", &Lattice::b)
        .def_readonly("rho", &Lattice::rho)
        .def_readonly("theta", &Lattice::theta)
        .def("cell_area", &Lattice::cell_area);
    m.def("normalize_lattice", &normalize_lattice, py::arg("a"), py::arg("b"));
    m.def("torus_distance",
          [](const Lattice& L, double x1, double y1, double x2, double y2) {
              return torus_distance(L, {x1, y1}, {x2, y2});
          });

    py::class_<CollarParams>(m, "CollarParams")
        .def_readonly("l", &CollarParams::l)
        .def_readonly("w", &CollarParams::w)
        .def_readonly("T", &CollarParams::T)
        .def_readonly("lam", &CollarParams::lambda);
    m.def("collar_from_length", &collar_from_length, py::arg("l"));
    m.def("collar_distance", &collar_distance, py::arg("params"), py::arg("t1"), py::arg("t2"));
    m.def("injectivity_radius_profile", &injectivity_radius_profile, py::arg("params"),
          py::arg("t"));
    m.def("hyperbolic_ball_area", &hyperbolic_ball_area, py::arg("r"));
    m.def("annulus_estimate_audit", &annulus_estimate_audit, py::arg("a"), py::arg("p"),
          py::arg("per_disk_bound"));

    py::class_<ResultRow>(m, "ResultRow")
        .def_readonly("experiment", &ResultRow::experiment)
        .def_readonly("params", &ResultRow::params)
        .def_readonly("value", &ResultRow::value)
        .def_readonly("bound", &ResultRow::bound)
        .def_readonly("pass_", &ResultRow::pass);

    m.def("run_experiment",
          [](const std::string& kind, std::uint64_t seed, int jobs,
             const std::map<std::string, std::map<std::string, std::string>>& sections) {
              ExperimentConfig cfg;
              cfg.kind = kind;
              cfg.seed = seed;
              cfg.jobs = jobs;
              cfg.sections = sections;
              return run(cfg);
          },
          py::arg("kind"), py::arg("seed") = 1, py::arg("jobs") = 1,
          py::arg("sections") = std::map<std::string, std::map<std::string, std::string>>{});
    m.def("rows_to_csv", [](const std::vector<ResultRow>& rows) {
        std::ostringstream out;
        write_csv(rows, out);
        return out.str();
    });
}
