#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "mva/branch.hpp"
#include "mva/local_case.hpp"
#include "mva/mvt.hpp"

namespace mva {

inline constexpr int kDefaultKmax = 16;

/// Local structure of the solution set of F(b, c) = 0 at a solution (b0, c0).
///
/// k is the order of vanishing of g2 at 0 (first j with f^(j+1)(c0) != 0),
/// l that of g1; alpha0 and beta0 are the leading coefficients of g1 and g2,
/// sigma1/sigma2 their signs. k == 1 means f''(c0) != 0. l == 1 means
/// f'(b0) != f'(c0). An order that is not found within kmax is reported as 0.
struct DegeneracyReport {
    int k = 0;
    int l = 0;
    double alpha0 = 0.0;
    double beta0 = 0.0;
    int sigma1 = 0;
    int sigma2 = 0;
    LocalCase local_case = LocalCase::Degenerate;

    // Audit values behind the thresholded calls.
    double second_derivative_c0 = 0.0;   // f''(c0)
    double slope_gap = 0.0;              // f'(b0) - f'(c0)
    bool c_of_b = false;                 // a continuous c = C(b) exists locally
    bool b_of_c = false;                 // b = B(c) exists locally (l == 1)
};

/// Nonzero test used across classification: |v| > tol * max(1, scale).
bool is_nonzero(double v, double scale, double tol = 1e-9);

/// Decision table:
///   f''(c0) != 0                       -> RegularC
///   k odd                              -> UniqueOdd
///   k even, l == 1                     -> RegularBOnly (one-sided fold)
///   k even, l even, sigma1*sigma2 = +1 -> TwoBranches
///   k even, l even, sigma1*sigma2 = -1 -> Isolated
///   k even, l odd >= 3                 -> OneSided
///   k or l not found within kmax       -> Degenerate
/// Throws Error{NotASolution} when |F(b0, c0)| > tol.
DegeneracyReport classify_point(const Problem& p, double b0, double c0, int kmax = kDefaultKmax, double tol = 1e-10);

/// Side of b0 on which one-sided branches live: sign(sigma2/sigma1). Only
/// meaningful for OneSided and RegularBOnly reports.
int allowed_side(const DegeneracyReport& report);

/// Normal-form coordinates u(x), v(y) with sigma1*u^l - sigma2*v^k = g1(x) - g2(y).
class MorseCoordinates {
public:
    MorseCoordinates(const Problem& p, double b0, double c0, const DegeneracyReport& report, int kmax = kDefaultKmax);

    /// Half-widths of the neighborhood where both radicands keep their sign.
    double x_radius() const noexcept { return x_radius_; }
    double y_radius() const noexcept { return y_radius_; }

    double u(double x) const;
    double v(double y) const;
    double x_of_u(double u) const;
    double y_of_v(double v) const;

    double g1(double x) const { return split_.g1(x); }
    double g2(double y) const { return split_.g2(y); }

    int l() const noexcept { return l_; }
    int k() const noexcept { return k_; }
    int sigma1() const noexcept { return sigma1_; }
    int sigma2() const noexcept { return sigma2_; }

private:
    double radicand1(double x) const;
    double radicand2(double y) const;

    SplitPair split_;
    Jet jet1_;
    Jet jet2_;
    int l_;
    int k_;
    int sigma1_;
    int sigma2_;
    double value_scale_;
    double x_radius_ = 0.0;
    double y_radius_ = 0.0;
};

/// sign(z)*|z|^(1/p) for odd p; z^(1/p) for z >= 0 and even p. Negative z
/// with even p throws Error{OutsideNeighborhood}.
double real_root(double z, int p);

struct ExtremalAbscissa {
    double c0 = 0.0;
    int k = 0;
};

/// Global extremum of the secant-normalized function on [a0, b0] (grid scan
/// of `grid` points, then bisection on g' = 0). Ties keep the smallest c0.
ExtremalAbscissa find_extremal_abscissa(const Problem& p, int grid = 4096, int kmax = kDefaultKmax);

struct GuaranteedBranch {
    double c0 = 0.0;
    int k = 0;
    DegeneracyReport report;
    Branch branch;
};

/// Extremal abscissa at (b0, c0) plus the branch c = C(b) through it over
/// `b_range` (default b0 +- 0.2*(b0 - a0), clipped to the domain).
GuaranteedBranch guaranteed_branch(const Problem& p, std::optional<Interval> b_range = std::nullopt,
                                   const TraceConfig& config = {});

}  // namespace mva
