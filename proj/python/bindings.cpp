#include "fksym/catalog.hpp"
#include "fksym/errors.hpp"
#include "fksym/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

namespace py = pybind11;
using namespace fksym;

namespace {

const CatalogEntry& entry(const std::string& name) { return get_entry(name); }

py::list atoms_list(const std::vector<AtomSpec>& atoms) {
    py::list out;
    for (const auto& a : atoms) {
        py::dict d;
        d["location"] = a.location;
        d["order"] = a.order;
        d["weight"] = a.weight;
        out.append(d);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Transition densities, Feynman-Kac expectations and verification suites";

    // Translators run most-recent first, so the base class goes first.
    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ValidityError>(m, "ValidityError", PyExc_ValueError);
    py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_NotImplementedError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    (void)base;

    m.def("entry_names", &entry_names);
    m.def("manifest_json", &manifest_json);
    m.def(
        "parameters",
        [](const std::string& name) {
            std::vector<std::pair<std::string, double>> out;
            for (const auto& p : entry(name).parameters()) out.emplace_back(p.name, p.default_value);
            return out;
        },
        py::arg("entry"), "(name, default) pairs of an entry's parameters");
    m.def(
        "resolve", [](const std::string& name, const Params& p) { return entry(name).resolve(p); },
        py::arg("entry"), py::arg("params") = Params{});

    m.def(
        "density",
        [](const std::string& name, const Params& p, double t, double x, double y) {
            return density(entry(name), p, t, x, y);
        },
        py::arg("entry"), py::arg("params"), py::arg("t"), py::arg("x"), py::arg("y"));
    m.def(
        "log_density",
        [](const std::string& name, const Params& p, double t, double x, double y) {
            const auto lv = log_density(entry(name), p, t, x, y);
            const double log_abs =
                lv.sign == 0.0 ? -std::numeric_limits<double>::infinity() : lv.log_abs;
            return std::make_pair(log_abs, lv.sign);
        },
        py::arg("entry"), py::arg("params"), py::arg("t"), py::arg("x"), py::arg("y"),
        "(log|p|, sign); sign is 0 for an exact zero");
    m.def(
        "atoms",
        [](const std::string& name, const Params& p, double t, double x) {
            return atoms_list(kernel(entry(name), p, t, x).atoms);
        },
        py::arg("entry"), py::arg("params"), py::arg("t"), py::arg("x"));
    m.def(
        "total_mass",
        [](const std::string& name, const Params& p, double t, double x) {
            return total_mass(entry(name), p, t, x);
        },
        py::arg("entry"), py::arg("params"), py::arg("t"), py::arg("x"));
    m.def(
        "transform_rhs",
        [](const std::string& name, const Params& p, double lambda, double t, double x) {
            return transform_rhs(entry(name), p, lambda, t, x);
        },
        py::arg("entry"), py::arg("params"), py::arg("lam"), py::arg("t"), py::arg("x"));
    m.def(
        "expectation",
        [](const std::string& name, const Params& p, double lambda, double t, double x,
           bool quadrature) {
            const auto& e = entry(name);
            return quadrature ? expectation_quadrature(e, p, lambda, t, x)
                              : expectation(e, p, lambda, t, x);
        },
        py::arg("entry"), py::arg("params"), py::arg("lam"), py::arg("t"), py::arg("x"),
        py::arg("quadrature") = false);
    m.def(
        "joint_laplace_in_mu",
        [](const std::string& name, const Params& p, double lambda, double t, double x,
           const std::vector<double>& mu_grid) {
            return joint_laplace_in_mu(entry(name), p, lambda, t, x, mu_grid);
        },
        py::arg("entry"), py::arg("params"), py::arg("lam"), py::arg("t"), py::arg("x"),
        py::arg("mu_grid"));

    m.def("suite_names", &suite_names);
    m.def(
        "run_suite_json",
        [](const std::string& suite, const std::string& entry_name, std::size_t paths, int steps,
           std::uint64_t seed, double tolerance_scale) {
            SuiteOptions o;
            o.entry = entry_name;
            o.mc_paths = paths;
            o.mc_steps = steps;
            o.seed = seed;
            o.tolerance_scale = tolerance_scale;
            std::vector<VerificationReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_suite(suite, o);
            }
            return reports_to_json(reports);
        },
        py::arg("suite"), py::arg("entry") = "", py::arg("paths") = 100000, py::arg("steps") = 2000,
        py::arg("seed") = 7, py::arg("tolerance_scale") = 1.0);
}
