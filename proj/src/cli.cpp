#include "mva/cli.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mva/classify.hpp"
#include "mva/continuation.hpp"
#include "mva/error.hpp"
#include "mva/expr.hpp"
#include "mva/mvt.hpp"
#include "mva/numfmt.hpp"
#include "mva/scanner.hpp"
#include "mva/solver.hpp"

namespace mva::cli {

namespace {

struct Options {
    std::string function;
    double a0 = 0.0;
    std::vector<double> b;
    std::optional<double> c;
    std::optional<double> b_min;
    std::optional<double> b_max;
    std::optional<double> c_min;
    std::optional<double> c_max;
    std::size_t columns = 400;
    int c_grid = kDefaultGrid;
    double tol = 1e-10;
    int kmax = kDefaultKmax;
    double step = 0.0;
    std::string output;
    std::string format = "csv";
    unsigned threads = 0;
    bool b_of_c = false;

    // fixed-point
    std::string map;
    std::string gx;
    std::string gy;
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<double> start;
    std::optional<double> x0;
    std::optional<double> y0;
    std::optional<double> x;
    double rho = 0.5;
    int max_iter = 200;
    bool show_trace = false;
};

bool is_usage(ErrorKind k) {
    switch (k) {
        case ErrorKind::Syntax:
        case ErrorKind::UnknownIdentifier:
        case ErrorKind::MalformedNumber:
        case ErrorKind::InvalidArgument:
        case ErrorKind::UnknownFormat: return true;
        default: return false;
    }
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double single_b(const Options& o) {
    if (o.b.size() != 1) throw UsageError("exactly one -b value is required");
    return o.b.front();
}

double need(const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError(std::string("missing required option ") + flag);
    return *v;
}

Problem make_problem(const Options& o, double b0, double domain_hi) {
    const double hi = std::max(b0, domain_hi);
    return Problem(parse(o.function), o.a0, b0, Interval{o.a0, hi});
}

void deliver(const std::string& text, const Options& o, std::ostream& out) {
    if (o.output.empty() || o.output == "-") {
        out << text;
        return;
    }
    std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::Io, "cannot open '" + o.output + "' for writing");
    file << text;
    if (!file) throw Error(ErrorKind::Io, "failed writing '" + o.output + "'");
}

nlohmann::ordered_json report_json(const DegeneracyReport& r) {
    nlohmann::ordered_json j;
    j["k"] = r.k;
    j["l"] = r.l;
    j["alpha0"] = r.alpha0;
    j["beta0"] = r.beta0;
    j["sigma1"] = r.sigma1;
    j["sigma2"] = r.sigma2;
    j["case"] = to_string(r.local_case);
    return j;
}

TraceConfig trace_config(const Options& o) {
    TraceConfig tc;
    tc.step = o.step;
    tc.tol = o.tol;
    tc.kmax = o.kmax;
    return tc;
}

void cmd_abscissae(const Options& o, std::ostream& out) {
    if (o.b.empty()) throw UsageError("at least one -b value is required");
    double top = o.b.front();
    for (double b : o.b) top = std::max(top, b);
    if (!(top > o.a0)) throw Error(ErrorKind::InvalidArgument, "every b must exceed a");
    const Problem p = make_problem(o, top, top);
    const bool tagged = o.b.size() > 1;
    for (double b : o.b) {
        for (double c : abscissae(p, b, o.tol, o.c_grid)) {
            if (tagged) out << format_number(b) << ',';
            out << format_number(c) << '\n';
        }
    }
}

void cmd_classify(const Options& o, std::ostream& out) {
    const double b0 = single_b(o);
    const Problem p = make_problem(o, b0, b0);
    const DegeneracyReport r = classify_point(p, b0, need(o.c, "-c"), o.kmax, o.tol);
    out << report_json(r).dump(2) << '\n';
}

void cmd_trace(const Options& o, std::ostream& out) {
    const double b0 = single_b(o);
    const double c0 = need(o.c, "-c");
    const double length = b0 - o.a0;
    const Format fmt = format_from_string(o.format);
    Branch br;
    if (o.b_of_c) {
        const Interval range{o.c_min.value_or(c0 - 0.2 * length), o.c_max.value_or(c0 + 0.2 * length)};
        const Problem p = make_problem(o, b0, o.b_max.value_or(b0 + 0.5 * length));
        br = trace_b_of_c(p, b0, c0, range, trace_config(o));
    } else {
        const Interval range{o.b_min.value_or(b0 - 0.2 * length), o.b_max.value_or(b0 + 0.2 * length)};
        const Problem p = make_problem(o, b0, range.hi);
        br = trace_c_of_b(p, b0, c0, range, trace_config(o));
    }
    deliver(render(br, fmt), o, out);
}

void cmd_scan(const Options& o, std::ostream& out) {
    const double b_min = need(o.b_min, "--b-min");
    const double b_max = need(o.b_max, "--b-max");
    const Format fmt = format_from_string(o.format);
    const Problem p = make_problem(o, b_max, b_max);
    const ScanResult r = scan(p, b_min, b_max, o.columns, o.c_grid, o.tol, o.threads);
    deliver(render(r, fmt), o, out);
}

void cmd_guaranteed(const Options& o, std::ostream& out) {
    const double b0 = single_b(o);
    const double length = b0 - o.a0;
    const Interval range{o.b_min.value_or(b0 - 0.2 * length), o.b_max.value_or(b0 + 0.2 * length)};
    const Problem p = make_problem(o, b0, range.hi);
    const GuaranteedBranch g = guaranteed_branch(p, range, trace_config(o));
    if (o.output.empty()) {
        nlohmann::ordered_json j;
        j["c0"] = g.c0;
        j["k"] = g.k;
        j["case"] = to_string(g.report.local_case);
        j["points"] = g.branch.points.size();
        j["stop_low"] = to_string(g.branch.stop_low);
        j["stop_high"] = to_string(g.branch.stop_high);
        out << j.dump(2) << '\n';
        return;
    }
    deliver(render(g.branch, format_from_string(o.format)), o, out);
    out << "c0 " << format_number(g.c0) << " k " << g.k << ' ' << to_string(g.report.local_case) << '\n';
}

void cmd_fixed_point(const Options& o, std::ostream& out) {
    if (!o.map.empty()) {
        const Expr k = parse(o.map);
        const Interval dom{need(o.lo, "--lo"), need(o.hi, "--hi")};
        const FixedPointResult r = fixed_point([&](double y) { return eval(k, y); }, dom, o.rho, o.tol, o.max_iter,
                                               o.start.value_or(std::nan("")));
        if (o.show_trace) {
            for (double y : r.trace.iterates) out << format_number(y) << '\n';
        } else {
            out << format_number(r.y_star) << '\n';
        }
        return;
    }
    if (o.gx.empty() || o.gy.empty()) throw UsageError("fixed-point needs --map or both --gx and --gy");
    const Expr gx = parse(o.gx);
    const Expr gy = parse(o.gy);
    Bivariate f = [gx, gy](double x, double y) {
        std::array<double, 2> dx{}, dy{};
        derivatives_into(gx, x, dx);
        derivatives_into(gy, y, dy);
        return Partials{dx[0] - dy[0], dx[1], -dy[1]};
    };
    SolverConfig config;
    config.rho = o.rho;
    config.tol = o.tol;
    config.max_iter = o.max_iter;
    const ImplicitSolver solver(f, need(o.x0, "--x0"), need(o.y0, "--y0"), config);
    const FixedPointResult r = solver.solve_with_trace(need(o.x, "-x"));
    if (o.show_trace) {
        for (double y : r.trace.iterates) out << format_number(y) << '\n';
    } else {
        out << format_number(r.y_star) << '\n';
    }
}

void add_problem_flags(CLI::App* sub, Options& o, bool need_b) {
    sub->add_option("-f,--function", o.function, "f(x) as an expression in x")->required();
    sub->add_option("-a", o.a0, "left endpoint a0")->required();
    auto* b = sub->add_option("-b", o.b, "right endpoint b (repeatable for abscissae)");
    if (need_b) b->required();
    sub->add_option("--tol", o.tol, "residual tolerance")->capture_default_str();
    sub->add_option("--kmax", o.kmax, "highest jet order examined")->capture_default_str();
    sub->add_option("--c-grid", o.c_grid, "c grid points per column")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Mean value abscissae: solve, trace, classify and scan F(b, c) = 0", "mva"};
    app.require_subcommand(1);

    auto* sub_abs = app.add_subcommand("abscissae", "all abscissae c in (a, b) for each -b");
    add_problem_flags(sub_abs, o, true);

    auto* sub_cls = app.add_subcommand("classify", "local case at a solution (b, c) as JSON");
    add_problem_flags(sub_cls, o, true);
    sub_cls->add_option("-c", o.c, "abscissa c0")->required();

    auto* sub_trace = app.add_subcommand("trace", "branch through (b, c)");
    add_problem_flags(sub_trace, o, true);
    sub_trace->add_option("-c", o.c, "abscissa c0")->required();
    sub_trace->add_option("--b-min", o.b_min, "lower end of the b range");
    sub_trace->add_option("--b-max", o.b_max, "upper end of the b range");
    sub_trace->add_option("--c-min", o.c_min, "lower end of the c range (with --b-of-c)");
    sub_trace->add_option("--c-max", o.c_max, "upper end of the c range (with --b-of-c)");
    sub_trace->add_flag("--b-of-c", o.b_of_c, "trace b = B(c) instead of c = C(b)");
    sub_trace->add_option("--step", o.step, "parameter step (0: 1% of b - a)")->capture_default_str();
    sub_trace->add_option("-o,--output", o.output, "output file (default stdout)");
    sub_trace->add_option("--format", o.format, "csv, json or svg")->capture_default_str();

    auto* sub_scan = app.add_subcommand("scan", "all solutions over a b grid");
    add_problem_flags(sub_scan, o, false);
    sub_scan->add_option("--b-min", o.b_min, "first column")->required();
    sub_scan->add_option("--b-max", o.b_max, "last column")->required();
    sub_scan->add_option("--columns", o.columns, "number of columns")->capture_default_str();
    sub_scan->add_option("--threads", o.threads, "worker threads (0: all cores)")->capture_default_str();
    sub_scan->add_option("-o,--output", o.output, "output file (default stdout)");
    sub_scan->add_option("--format", o.format, "csv, json or svg")->capture_default_str();

    auto* sub_g = app.add_subcommand("guaranteed", "extremal abscissa and the branch through it");
    add_problem_flags(sub_g, o, true);
    sub_g->add_option("--b-min", o.b_min, "lower end of the b range");
    sub_g->add_option("--b-max", o.b_max, "upper end of the b range");
    sub_g->add_option("--step", o.step, "parameter step (0: 1% of b - a)")->capture_default_str();
    sub_g->add_option("-o,--output", o.output, "branch output file (default: JSON summary on stdout)");
    sub_g->add_option("--format", o.format, "csv, json or svg")->capture_default_str();

    auto* sub_fp = app.add_subcommand("fixed-point", "contraction iteration on K(y) or on gx(x) = gy(y)");
    sub_fp->add_option("--map", o.map, "K(y) written in the variable x");
    sub_fp->add_option("--lo", o.lo, "interval start for --map");
    sub_fp->add_option("--hi", o.hi, "interval end for --map");
    sub_fp->add_option("--start", o.start, "first iterate (default midpoint)");
    sub_fp->add_option("--gx", o.gx, "left side gx(x)");
    sub_fp->add_option("--gy", o.gy, "right side gy(y), written in x");
    sub_fp->add_option("--x0", o.x0, "x of the known solution");
    sub_fp->add_option("--y0", o.y0, "y of the known solution");
    sub_fp->add_option("-x", o.x, "x at which to solve");
    sub_fp->add_option("--rho", o.rho, "contraction constant")->capture_default_str();
    sub_fp->add_option("--tol", o.tol, "stopping tolerance")->capture_default_str();
    sub_fp->add_option("--max-iter", o.max_iter, "iteration cap")->capture_default_str();
    sub_fp->add_flag("--trace", o.show_trace, "print every iterate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*sub_abs) cmd_abscissae(o, out);
        else if (*sub_cls) cmd_classify(o, out);
        else if (*sub_trace) cmd_trace(o, out);
        else if (*sub_scan) cmd_scan(o, out);
        else if (*sub_g) cmd_guaranteed(o, out);
        else if (*sub_fp) cmd_fixed_point(o, out);
    } catch (const UsageError& e) {
        err << "mva: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "mva: " << e.what() << '\n';
        return is_usage(e.kind()) ? kUsage : kNumerical;
    }
    return kOk;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace mva::cli
