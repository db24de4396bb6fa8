#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace mva {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
    double width() const noexcept { return hi - lo; }
    double mid() const noexcept { return 0.5 * (lo + hi); }
};

/// Value and first partials of a two-variable function at one point.
struct Partials {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

/// F(x, y) together with F_x and F_y. Implementations must be pure.
using Bivariate = std::function<Partials(double x, double y)>;

struct SolverConfig {
    double epsilon = 0.0;  // initial y half-width; 0 picks 0.1*max(1,|y0|)
    double delta = 0.0;    // initial x half-width; 0 picks 0.1*max(1,|y0|)
    double rho = 0.5;
    double tol = 1e-12;
    int max_iter = 200;
    int grid = 64;         // samples per axis for certification
};

void validate(const SolverConfig& config);

struct IterationTrace {
    std::vector<double> iterates;   // y_0 .. y_N
    std::vector<double> residuals;  // |y_{n+1} - y_n|, one per step
    double rho = 0.5;               // contraction constant the stopping rule used
    double lipschitz_estimate = 0.0;
    bool converged = false;
};

struct FixedPointResult {
    double y_star = 0.0;
    IterationTrace trace;
};

/// Iterates y <- K(y) from `start` (the midpoint of I when NaN).
///
/// The contraction hypothesis is checked by sampling difference quotients of K
/// on `samples` equally spaced points of I; an estimate >= 1 is NotContraction.
/// The stopping rule is |y_{n+1} - y_n| <= tol*(1-rho)/rho, where rho is the
/// larger of the supplied constant and the sampled estimate; this certifies
/// |y - y*| <= tol. An iterate outside I is EscapesInterval.
FixedPointResult fixed_point(const std::function<double(double)>& map, Interval domain, double rho, double tol,
                             int max_iter, double start = std::numeric_limits<double>::quiet_NaN(),
                             int samples = 64);

/// A priori iteration bound ceil(log(tol*(1-rho)/|y1-y0|)/log(rho)) + 1.
int iteration_bound(double first_step, double rho, double tol);

/// K(y; x) = y - F(x, y) / F_y(x0, y0).
class ContractionMap {
public:
    ContractionMap(Bivariate f, double x0, double y0);

    double operator()(double y, double x) const;
    /// dK/dy = 1 - F_y(x, y) / F_y(x0, y0).
    double slope(double y, double x) const;
    double frozen_fy() const noexcept { return fy0_; }

private:
    Bivariate f_;
    double fy0_;
};

/// Throws Error{DegenerateFy} when |F_y(x0, y0)| <= 1e-12 * max(1, |F_x(x0, y0)|).
ContractionMap build_k(const Bivariate& f, double x0, double y0);

struct Neighborhood {
    double epsilon = 0.0;  // |y - y0| <= epsilon
    double delta = 0.0;    // |x - x0| <= delta
    int halvings = 0;
};

/// Finds a box on which K(.; x) is a rho-contraction of [y0-eps, y0+eps] into
/// itself, by halving from the initial guesses and checking a grid x grid
/// sample of the box.
Neighborhood certify_neighborhood(const Bivariate& f, double x0, double y0, const SolverConfig& config);

/// Certifies once around (x0, y0), then solves F(x, y) = 0 for many x.
class ImplicitSolver {
public:
    ImplicitSolver(Bivariate f, double x0, double y0, SolverConfig config = {});

    const Neighborhood& neighborhood() const noexcept { return hood_; }
    double solve(double x) const;
    FixedPointResult solve_with_trace(double x) const;

private:
    Bivariate f_;
    double x0_;
    double y0_;
    SolverConfig config_;
    ContractionMap k_;
    Neighborhood hood_;
};

double implicit_solve(const Bivariate& f, double x0, double y0, double x, const SolverConfig& config = {});

/// -F_x / F_y at (x, y). Throws Error{DegenerateFy} when F_y vanishes.
double implicit_derivative(const Bivariate& f, double x, double y);

}  // namespace mva
