#include "mva/mvt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "mva/error.hpp"
#include "mva/numfmt.hpp"

namespace mva {

Problem::Problem(Expr f, double a0, double b0, std::optional<Interval> domain)
    : f_(std::move(f)), a0_(a0), b0_(b0), domain_(domain.value_or(Interval{a0, b0})), fa0_(0.0) {
    if (!std::isfinite(a0_) || !std::isfinite(b0_) || !(a0_ < b0_)) {
        throw Error(ErrorKind::InvalidArgument, "need finite endpoints with a0 < b0");
    }
    if (!std::isfinite(domain_.lo) || !std::isfinite(domain_.hi) || !(domain_.lo <= a0_) || !(b0_ <= domain_.hi)) {
        throw Error(ErrorKind::InvalidArgument, "domain must be finite and contain [a0, b0]");
    }
    fa0_ = eval(f_, a0_);
    (void)eval(f_, b0_);
}

double Problem::scale() const noexcept {
    return std::max({1.0, std::fabs(a0_), std::fabs(b0_), std::fabs(domain_.lo), std::fabs(domain_.hi)});
}

Problem Problem::with_b0(double b0) const {
    Interval d = domain_;
    d.hi = std::max(d.hi, b0);
    return Problem(f_, a0_, b0, d);
}

SolutionPoint SolutionPoint::validated(const Problem& p, double b, double c, double tol) {
    if (!(p.a0() < c && c < b)) {
        throw Error(ErrorKind::NotASolution, "abscissa " + format_number(c) + " is not interior to (" +
                                                 format_number(p.a0()) + ", " + format_number(b) + ")");
    }
    const double residual = std::fabs(big_f_value(p, b, c));
    if (!(residual <= tol)) {
        throw Error(ErrorKind::NotASolution, "residual " + format_number(residual) + " exceeds " + format_number(tol));
    }
    return SolutionPoint{b, c, residual};
}

namespace {

void require_apart(const Problem& p, double b) {
    if (!(std::fabs(b - p.a0()) >= 1e-12 * std::max(p.scale(), std::fabs(b)))) {
        throw Error(ErrorKind::EndpointCollision, "b = " + format_number(b) + " collides with a0");
    }
}

double derivative_at(const Expr& f, double c) {
    std::array<double, 2> d{};
    derivatives_into(f, c, d);
    return d[1];
}

}  // namespace

double secant_slope(const Problem& p, double b) {
    require_apart(p, b);
    return (eval(p.f(), b) - p.f_a0()) / (b - p.a0());
}

Partials big_f(const Problem& p, double b, double c) {
    require_apart(p, b);
    std::array<double, 2> fb{};
    std::array<double, 3> fc{};
    derivatives_into(p.f(), b, fb);
    derivatives_into(p.f(), c, fc);
    const double len = b - p.a0();
    const double rise = fb[0] - p.f_a0();
    Partials out;
    out.value = rise / len - fc[1];
    out.dx = (fb[1] * len - rise) / (len * len);
    out.dy = -2.0 * fc[2];
    return out;
}

double big_f_value(const Problem& p, double b, double c) { return secant_slope(p, b) - derivative_at(p.f(), c); }

Bivariate as_bivariate(const Problem& p) {
    return [p](double b, double c) { return big_f(p, b, c); };
}

Problem normalize(const Problem& p) {
    const double slope = (eval(p.f(), p.b0()) - p.f_a0()) / (p.b0() - p.a0());
    const Expr x = Expr::variable();
    const Expr secant = Expr::constant(slope) * (x - Expr::constant(p.a0())) + Expr::constant(p.f_a0());
    return Problem(p.f() - secant, p.a0(), p.b0(), p.domain());
}

namespace {

double bisect(const std::function<double(double)>& g, double lo, double hi, double glo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (std::signbit(gm) == std::signbit(glo)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return std::fabs(g(lo)) <= std::fabs(g(hi)) ? lo : hi;
}

double golden_min_abs(const std::function<double(double)>& g, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = std::fabs(g(x1));
    double f2 = std::fabs(g(x2));
    for (int it = 0; it < 200 && (hi - lo) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(lo));
         ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = std::fabs(g(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = std::fabs(g(x2));
        }
    }
    return f1 <= f2 ? x1 : x2;
}

}  // namespace

std::vector<double> abscissae(const Problem& p, double b, double tol, int grid_n) {
    if (grid_n < 64) throw Error(ErrorKind::InvalidArgument, "grid_n must be at least 64");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    if (!(b > p.a0())) throw Error(ErrorKind::InvalidArgument, "b must exceed a0");
    if (b > p.domain().hi * (1.0 + 1e-15) + 1e-15) throw Error(ErrorKind::InvalidArgument, "b lies outside the domain");
    if (!(b - p.a0() >= 1e-9 * p.scale())) throw Error(ErrorKind::EndpointCollision, "b is too close to a0");

    const double slope = secant_slope(p, b);
    auto residual = [&](double c) { return slope - derivative_at(p.f(), c); };

    const double a0 = p.a0();
    const double h = (b - a0) / grid_n;
    const std::size_t n = static_cast<std::size_t>(grid_n);
    std::vector<double> cs(n + 1), fs(n + 1);
    bool all_zero = true;
    for (std::size_t i = 0; i <= n; ++i) {
        cs[i] = i == n ? b : a0 + h * static_cast<double>(i);
        fs[i] = residual(cs[i]);
        if (std::fabs(fs[i]) > tol) all_zero = false;
    }
    if (all_zero) {
        throw Error(ErrorKind::DegenerateProblem,
                    "F(b, c) vanishes for every sampled c; every point is an abscissa (f is linear)");
    }

    auto sign_change = [&](std::size_t i) { return fs[i] != 0.0 && fs[i + 1] != 0.0 && std::signbit(fs[i]) != std::signbit(fs[i + 1]); };

    std::vector<double> roots;
    for (std::size_t i = 0; i < n; ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(cs[i]);
        } else if (sign_change(i)) {
            roots.push_back(bisect(residual, cs[i], cs[i + 1], fs[i]));
        }
    }
    // Touching roots: |F| has a local minimum on the grid without a sign change nearby.
    for (std::size_t i = 1; i < n; ++i) {
        if (fs[i] == 0.0 || sign_change(i - 1) || sign_change(i)) continue;
        const double m = std::fabs(fs[i]);
        if (m <= std::fabs(fs[i - 1]) && m <= std::fabs(fs[i + 1])) {
            const double c = golden_min_abs(residual, cs[i - 1], cs[i + 1]);
            if (std::fabs(residual(c)) <= tol) roots.push_back(c);
        }
    }

    std::vector<double> kept;
    for (double c : roots) {
        if (a0 < c && c < b && std::fabs(residual(c)) <= tol) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<double> merged;
    for (double c : kept) {
        if (merged.empty() || c - merged.back() >= h) merged.push_back(c);
    }
    return merged;
}

SplitFunction::SplitFunction(Problem p, double b0, double c0, Side side)
    : p_(std::move(p)), b0_(b0), c0_(c0), fp_c0_(derivative_at(p_.f(), c0)), side_(side) {
    if (side_ == Side::Endpoint) require_apart(p_, b0_);
}

double SplitFunction::operator()(double t) const {
    if (side_ == Side::Endpoint) {
        const double b = b0_ + t;
        require_apart(p_, b);
        return (eval(p_.f(), b) - p_.f_a0()) / (b - p_.a0()) - fp_c0_;
    }
    return derivative_at(p_.f(), c0_ + t) - fp_c0_;
}

Jet SplitFunction::jet(int order) const {
    if (side_ == Side::Endpoint) {
        const Jet fb = jet_eval(p_.f(), b0_, order);
        std::vector<double> num(fb.coeffs().begin(), fb.coeffs().end());
        num[0] -= p_.f_a0();
        std::vector<double> den(num.size(), 0.0);
        den[0] = b0_ - p_.a0();
        if (den.size() > 1) den[1] = 1.0;
        std::vector<double> out(num.size());
        series::div(num, den, out);
        out[0] -= fp_c0_;
        return Jet(0.0, std::move(out));
    }
    const Jet fc = jet_eval(p_.f(), c0_, order + 1);
    std::vector<double> out(static_cast<std::size_t>(order) + 1);
    for (int j = 0; j <= order; ++j) out[static_cast<std::size_t>(j)] = (j + 1) * fc[j + 1];
    out[0] = 0.0;
    return Jet(0.0, std::move(out));
}

SplitPair g1_g2(const Problem& p, double b0, double c0) {
    return SplitPair{SplitFunction(p, b0, c0, SplitFunction::Side::Endpoint),
                     SplitFunction(p, b0, c0, SplitFunction::Side::Abscissa)};
}

}  // namespace mva
