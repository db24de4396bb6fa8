#include "mva/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mva/error.hpp"

namespace mva {

namespace {

constexpr double kSlack = 1e-12;

}  // namespace

void validate(const SolverConfig& config) {
    if (!(config.rho > 0.0 && config.rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "rho must lie in (0, 1)");
    if (!(config.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    if (config.epsilon < 0.0 || config.delta < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "epsilon and delta must be positive (or 0 for automatic)");
    }
    if (config.max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
    if (config.grid < 2) throw Error(ErrorKind::InvalidArgument, "grid must be at least 2");
}

FixedPointResult fixed_point(const std::function<double(double)>& map, Interval domain, double rho, double tol,
                             int max_iter, double start, int samples) {
    if (!(domain.lo < domain.hi)) throw Error(ErrorKind::InvalidArgument, "fixed_point needs a nondegenerate interval");
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidArgument, "rho must lie in (0, 1)");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");

    double estimate = 0.0;
    double prev_y = domain.lo;
    double prev_k = map(prev_y);
    for (int i = 1; i < samples; ++i) {
        const double y = domain.lo + domain.width() * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double k = map(y);
        estimate = std::max(estimate, std::fabs(k - prev_k) / (y - prev_y));
        prev_y = y;
        prev_k = k;
    }
    if (!(estimate < 1.0)) {
        throw Error(ErrorKind::NotContraction,
                    "sampled Lipschitz estimate " + std::to_string(estimate) + " is not below 1");
    }

    FixedPointResult result;
    IterationTrace& trace = result.trace;
    trace.lipschitz_estimate = estimate;
    trace.rho = std::max(rho, estimate);
    const double stop = tol * (1.0 - trace.rho) / trace.rho;

    double y = std::isnan(start) ? domain.mid() : start;
    if (!domain.contains(y)) throw Error(ErrorKind::EscapesInterval, "starting point lies outside the interval");
    trace.iterates.push_back(y);
    for (int n = 0; n < max_iter; ++n) {
        const double next = map(y);
        if (!std::isfinite(next) || !domain.contains(next)) {
            throw Error(ErrorKind::EscapesInterval, "iterate " + std::to_string(n + 1) + " left [" +
                                                        std::to_string(domain.lo) + ", " +
                                                        std::to_string(domain.hi) + "]");
        }
        const double step = std::fabs(next - y);
        trace.iterates.push_back(next);
        trace.residuals.push_back(step);
        y = next;
        if (step <= stop) {
            trace.converged = true;
            result.y_star = y;
            return result;
        }
    }
    throw Error(ErrorKind::MaxIterExceeded, "no convergence after " + std::to_string(max_iter) + " iterations");
}

int iteration_bound(double first_step, double rho, double tol) {
    if (!(first_step > 0.0)) return 1;
    const double n = std::ceil(std::log(tol * (1.0 - rho) / first_step) / std::log(rho));
    return static_cast<int>(std::max(n, 0.0)) + 1;
}

ContractionMap::ContractionMap(Bivariate f, double x0, double y0) : f_(std::move(f)) {
    const Partials p = f_(x0, y0);
    fy0_ = p.dy;
    if (!(std::fabs(fy0_) > 1e-12 * std::max(1.0, std::fabs(p.dx)))) {
        throw Error(ErrorKind::DegenerateFy, "F_y vanishes at the base point; the implicit function theorem does not apply");
    }
}

double ContractionMap::operator()(double y, double x) const { return y - f_(x, y).value / fy0_; }

double ContractionMap::slope(double y, double x) const { return 1.0 - f_(x, y).dy / fy0_; }

ContractionMap build_k(const Bivariate& f, double x0, double y0) { return ContractionMap(f, x0, y0); }

namespace {

bool contraction_holds(const ContractionMap& k, double x0, double y0, double eps, double delta,
                       const SolverConfig& config) {
    const int g = config.grid;
    for (int i = 0; i < g; ++i) {
        const double x = x0 + delta * (2.0 * i / (g - 1) - 1.0);
        for (int j = 0; j < g; ++j) {
            const double y = y0 + eps * (2.0 * j / (g - 1) - 1.0);
            double s;
            try {
                s = k.slope(y, x);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Domain) throw;
                return false;
            }
            if (!(std::fabs(s) <= config.rho + kSlack)) return false;
        }
    }
    return true;
}

bool containment_holds(const ContractionMap& k, double x0, double y0, double eps, double delta,
                       const SolverConfig& config) {
    const int g = config.grid;
    const double bound = eps * (1.0 - config.rho) * (1.0 + kSlack);
    for (int i = 0; i < g; ++i) {
        const double x = x0 + delta * (2.0 * i / (g - 1) - 1.0);
        double shift;
        try {
            shift = std::fabs(k(y0, x) - y0);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Domain) throw;
            return false;
        }
        if (!(shift <= bound)) return false;
    }
    return true;
}

}  // namespace

Neighborhood certify_neighborhood(const Bivariate& f, double x0, double y0, const SolverConfig& config) {
    validate(config);
    const ContractionMap k = build_k(f, x0, y0);
    const double guess = 0.1 * std::max(1.0, std::fabs(y0));
    Neighborhood hood{config.epsilon > 0.0 ? config.epsilon : guess, config.delta > 0.0 ? config.delta : guess, 0};
    constexpr int kMaxHalvings = 40;
    while (hood.halvings <= kMaxHalvings) {
        if (!contraction_holds(k, x0, y0, hood.epsilon, hood.delta, config)) {
            hood.epsilon *= 0.5;
            hood.delta *= 0.5;
            ++hood.halvings;
            continue;
        }
        if (!containment_holds(k, x0, y0, hood.epsilon, hood.delta, config)) {
            hood.delta *= 0.5;
            ++hood.halvings;
            continue;
        }
        return hood;
    }
    throw Error(ErrorKind::CannotCertify, "no contraction neighborhood found after 40 halvings");
}

ImplicitSolver::ImplicitSolver(Bivariate f, double x0, double y0, SolverConfig config)
    : f_(std::move(f)), x0_(x0), y0_(y0), config_(config), k_(f_, x0, y0), hood_() {
    hood_ = certify_neighborhood(f_, x0_, y0_, config_);
}

FixedPointResult ImplicitSolver::solve_with_trace(double x) const {
    if (!(std::fabs(x - x0_) <= hood_.delta * (1.0 + kSlack))) {
        throw Error(ErrorKind::OutsideNeighborhood, "x = " + std::to_string(x) + " lies outside the certified delta");
    }
    const Interval box{y0_ - hood_.epsilon, y0_ + hood_.epsilon};
    return fixed_point([this, x](double y) { return k_(y, x); }, box, config_.rho, config_.tol, config_.max_iter, y0_,
                       config_.grid);
}

double ImplicitSolver::solve(double x) const { return solve_with_trace(x).y_star; }

double implicit_solve(const Bivariate& f, double x0, double y0, double x, const SolverConfig& config) {
    return ImplicitSolver(f, x0, y0, config).solve(x);
}

double implicit_derivative(const Bivariate& f, double x, double y) {
    const Partials p = f(x, y);
    if (!(std::fabs(p.dy) > 1e-12 * std::max(1.0, std::fabs(p.dx)))) {
        throw Error(ErrorKind::DegenerateFy, "F_y vanishes; the implicit derivative is undefined");
    }
    return -p.dx / p.dy;
}

}  // namespace mva
