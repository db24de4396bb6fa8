#pragma once

#include <optional>
#include <vector>

#include "mva/expr.hpp"
#include "mva/solver.hpp"

namespace mva {

/// f with fixed left endpoint a0, reference right endpoint b0, and the closed
/// interval on which f is evaluated.
class Problem {
public:
    /// `domain` defaults to [a0, b0]. Throws Error{InvalidArgument} unless
    /// a0 < b0 and the domain is finite and contains [a0, b0]; f must be
    /// evaluable at a0 and b0.
    Problem(Expr f, double a0, double b0, std::optional<Interval> domain = std::nullopt);

    const Expr& f() const noexcept { return f_; }
    double a0() const noexcept { return a0_; }
    double b0() const noexcept { return b0_; }
    const Interval& domain() const noexcept { return domain_; }
    double f_a0() const noexcept { return fa0_; }

    /// max(1, |a0|, |b0|, domain extent); the unit for relative thresholds.
    double scale() const noexcept;

    Problem with_b0(double b0) const;

private:
    Expr f_;
    double a0_;
    double b0_;
    Interval domain_;
    double fa0_;
};

/// A solution (b, c) of the mean value condition with its residual |F(b, c)|.
struct SolutionPoint {
    double b = 0.0;
    double c = 0.0;
    double residual = 0.0;

    /// Enforces a0 < c < b and |F(b, c)| <= tol; otherwise Error{NotASolution}.
    static SolutionPoint validated(const Problem& p, double b, double c, double tol);

    friend bool operator==(const SolutionPoint&, const SolutionPoint&) = default;
};

/// Secant slope (f(b) - f(a0)) / (b - a0). Throws Error{EndpointCollision}
/// when |b - a0| < 1e-12 * scale.
double secant_slope(const Problem& p, double b);

/// F(b, c) = secant slope - f'(c), with
///   F_b = (f'(b)(b - a0) - (f(b) - f(a0))) / (b - a0)^2,   F_c = -f''(c).
Partials big_f(const Problem& p, double b, double c);

/// The value of F alone (one jet of order 1 at c plus the secant slope).
double big_f_value(const Problem& p, double b, double c);

/// F as a Bivariate in (x, y) = (b, c).
Bivariate as_bivariate(const Problem& p);

/// g(x) = f(x) - secant line through (a0, f(a0)) and (b0, f(b0)).
Problem normalize(const Problem& p);

inline constexpr int kDefaultGrid = 2048;

/// All mean value abscissae c in (a0, b) for fixed b: grid sign scan plus
/// bisection, and a secondary scan of local minima of |F| for touching
/// (double) roots. Sorted; roots closer than (b - a0)/grid_n are merged
/// keeping the smaller one. Throws Error{DegenerateProblem} when F(b, .)
/// vanishes on the whole grid.
std::vector<double> abscissae(const Problem& p, double b, double tol = 1e-10, int grid_n = kDefaultGrid);

/// One half of the separable split G(x, y) = F(b0 + x, c0 + y) = g1(x) - g2(y).
class SplitFunction {
public:
    enum class Side { Endpoint, Abscissa };

    SplitFunction(Problem p, double b0, double c0, Side side);

    double operator()(double t) const;
    /// Taylor coefficients at t = 0.
    Jet jet(int order) const;
    Side side() const noexcept { return side_; }

private:
    Problem p_;
    double b0_;
    double c0_;
    double fp_c0_;
    Side side_;
};

struct SplitPair {
    SplitFunction g1;  // (f(b0 + x) - f(a0)) / (b0 + x - a0) - f'(c0)
    SplitFunction g2;  // f'(c0 + y) - f'(c0)
};

SplitPair g1_g2(const Problem& p, double b0, double c0);

}  // namespace mva
