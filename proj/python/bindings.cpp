#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>

#include "mva/classify.hpp"
#include "mva/continuation.hpp"
#include "mva/error.hpp"
#include "mva/scanner.hpp"
#include "mva/solver.hpp"

namespace py = pybind11;
using namespace mva;

namespace {

Problem make(const std::string& f, double a0, double b0, double hi) {
    return Problem(parse(f), a0, b0, Interval{a0, std::max(b0, hi)});
}

py::dict branch_dict(const Branch& br) {
    py::dict d;
    py::list pts;
    for (const auto& q : br.points) pts.append(py::make_tuple(q.b, q.c, q.residual));
    d["parameter"] = std::string(to_string(br.parameter));
    d["points"] = pts;
    d["seed_index"] = br.seed_index;
    d["seed_case"] = std::string(to_string(br.seed_case));
    d["stop_low"] = std::string(to_string(br.stop_low));
    d["stop_high"] = std::string(to_string(br.stop_high));
    return d;
}

TraceConfig config_for(double step, double tol) {
    TraceConfig c;
    c.step = step;
    c.tol = tol;
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mean value abscissae: solve, classify, trace and scan F(b, c) = 0";

    static PyObject* error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    m.def("normalize_expression", [](const std::string& f) { return print(parse(f)); }, py::arg("f"),
          "Parses and prints an expression in canonical form.");
    m.def("evaluate", [](const std::string& f, double x) { return eval(parse(f), x); }, py::arg("f"), py::arg("x"));
    m.def("taylor", [](const std::string& f, double x0, int order) {
              const Jet j = jet_eval(parse(f), x0, order);
              return std::vector<double>(j.coeffs().begin(), j.coeffs().end());
          },
          py::arg("f"), py::arg("x0"), py::arg("order"), "Taylor coefficients f^(j)(x0)/j! for j = 0..order.");

    m.def(
        "abscissae",
        [](const std::string& f, double a0, double b, double tol, int grid) {
            return abscissae(make(f, a0, b, b), b, tol, grid);
        },
        py::arg("f"), py::arg("a0"), py::arg("b"), py::arg("tol") = 1e-10, py::arg("grid") = kDefaultGrid);

    m.def(
        "classify",
        [](const std::string& f, double a0, double b0, double c0, int kmax) {
            const DegeneracyReport r = classify_point(make(f, a0, b0, b0), b0, c0, kmax);
            py::dict d;
            d["k"] = r.k;
            d["l"] = r.l;
            d["alpha0"] = r.alpha0;
            d["beta0"] = r.beta0;
            d["sigma1"] = r.sigma1;
            d["sigma2"] = r.sigma2;
            d["case"] = std::string(to_string(r.local_case));
            return d;
        },
        py::arg("f"), py::arg("a0"), py::arg("b0"), py::arg("c0"), py::arg("kmax") = kDefaultKmax);

    m.def(
        "trace",
        [](const std::string& f, double a0, double b0, double c0, double lo, double hi, double step, bool b_of_c,
           double tol) {
            if (b_of_c) {
                const Problem p = make(f, a0, b0, b0 + 0.5 * (b0 - a0));
                return branch_dict(trace_b_of_c(p, b0, c0, Interval{lo, hi}, config_for(step, tol)));
            }
            const Problem p = make(f, a0, b0, hi);
            return branch_dict(trace_c_of_b(p, b0, c0, Interval{lo, hi}, config_for(step, tol)));
        },
        py::arg("f"), py::arg("a0"), py::arg("b0"), py::arg("c0"), py::arg("lo"), py::arg("hi"), py::arg("step") = 0.0,
        py::arg("b_of_c") = false, py::arg("tol") = 1e-10,
        "Branch through (b0, c0); [lo, hi] is the b range, or the c range when b_of_c is set.");

    m.def(
        "scan",
        [](const std::string& f, double a0, double b_min, double b_max, std::size_t columns, int c_grid,
           const std::string& format, unsigned threads) {
            const ScanResult r = scan(make(f, a0, b_max, b_max), b_min, b_max, columns, c_grid, 1e-10, threads);
            return render(r, format_from_string(format));
        },
        py::arg("f"), py::arg("a0"), py::arg("b_min"), py::arg("b_max"), py::arg("columns") = 400,
        py::arg("c_grid") = kDefaultGrid, py::arg("format") = "csv", py::arg("threads") = 0u,
        "Scans the solution set and returns it rendered as csv, json or svg.");

    m.def(
        "guaranteed",
        [](const std::string& f, double a0, double b0) {
            const GuaranteedBranch g = guaranteed_branch(make(f, a0, b0, b0 + 0.2 * (b0 - a0)));
            py::dict d;
            d["c0"] = g.c0;
            d["k"] = g.k;
            d["case"] = std::string(to_string(g.report.local_case));
            d["branch"] = branch_dict(g.branch);
            return d;
        },
        py::arg("f"), py::arg("a0"), py::arg("b0"));

    m.def(
        "fixed_point",
        [](const std::function<double(double)>& k, double lo, double hi, double rho, double tol, int max_iter,
           std::optional<double> start) {
            const FixedPointResult r =
                fixed_point(k, Interval{lo, hi}, rho, tol, max_iter, start.value_or(std::nan("")));
            return py::make_tuple(r.y_star, r.trace.iterates);
        },
        py::arg("k"), py::arg("lo"), py::arg("hi"), py::arg("rho"), py::arg("tol") = 1e-12, py::arg("max_iter") = 200,
        py::arg("start") = py::none(), "Iterates a contraction; returns (fixed point, iterates).");
}
