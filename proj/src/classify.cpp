#include "mva/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mva/continuation.hpp"
#include "mva/error.hpp"
#include "mva/numfmt.hpp"

namespace mva {

std::string_view to_string(LocalCase c) {
    switch (c) {
        case LocalCase::RegularC: return "REGULAR_C";
        case LocalCase::RegularBOnly: return "REGULAR_B_ONLY";
        case LocalCase::TwoBranches: return "TWO_BRANCHES";
        case LocalCase::Isolated: return "ISOLATED";
        case LocalCase::OneSided: return "ONE_SIDED";
        case LocalCase::UniqueOdd: return "UNIQUE_ODD";
        case LocalCase::Degenerate: return "DEGENERATE";
    }
    return "DEGENERATE";
}

LocalCase local_case_from_string(std::string_view s) {
    for (LocalCase c : {LocalCase::RegularC, LocalCase::RegularBOnly, LocalCase::TwoBranches, LocalCase::Isolated,
                        LocalCase::OneSided, LocalCase::UniqueOdd, LocalCase::Degenerate}) {
        if (to_string(c) == s) return c;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown case '" + std::string(s) + "'");
}

bool is_nonzero(double v, double scale, double tol) { return std::fabs(v) > tol * std::max(1.0, scale); }

namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Orders are decided on the jet rescaled to the interval length, t_j * L^j,
// so the high coefficients of g1 (which carry 1/L^j) do not swamp the scale.
std::optional<int> scaled_order(const Jet& jet, double length) {
    std::vector<double> c(jet.coeffs().begin(), jet.coeffs().end());
    double w = 1.0;
    for (double& t : c) {
        t *= w;
        w *= length;
    }
    return order_of_vanishing(Jet(0.0, std::move(c)), 1e-9, 1);
}

}  // namespace

DegeneracyReport classify_point(const Problem& p, double b0, double c0, int kmax, double tol) {
    if (kmax < 2) throw Error(ErrorKind::InvalidArgument, "kmax must be at least 2");
    const Partials here = big_f(p, b0, c0);
    if (!(std::fabs(here.value) <= tol)) {
        throw Error(ErrorKind::NotASolution, "|F(b0, c0)| = " + format_number(std::fabs(here.value)) +
                                                 " exceeds tol " + format_number(tol));
    }
    const SplitPair split = g1_g2(p, b0, c0);
    const Jet j1 = split.g1.jet(kmax);
    const Jet j2 = split.g2.jet(kmax);
    const double length = b0 - p.a0();

    DegeneracyReport r;
    r.second_derivative_c0 = j2[1];
    r.slope_gap = here.dx * length;

    const auto k = scaled_order(j2, length);
    const auto l = scaled_order(j1, length);
    r.k = k.value_or(0);
    r.l = l.value_or(0);
    if (k) r.beta0 = j2[*k];
    if (l) r.alpha0 = j1[*l];
    r.sigma1 = sign_of(r.alpha0);
    r.sigma2 = sign_of(r.beta0);
    r.b_of_c = r.l == 1;

    if (r.k == 1) {
        r.local_case = LocalCase::RegularC;
    } else if (r.k == 0) {
        r.local_case = LocalCase::Degenerate;
    } else if (r.k % 2 == 1) {
        r.local_case = LocalCase::UniqueOdd;
    } else if (r.l == 0) {
        r.local_case = LocalCase::Degenerate;
    } else if (r.l == 1) {
        r.local_case = LocalCase::RegularBOnly;
    } else if (r.l % 2 == 0) {
        r.local_case = r.sigma1 * r.sigma2 > 0 ? LocalCase::TwoBranches : LocalCase::Isolated;
    } else {
        r.local_case = LocalCase::OneSided;
    }
    r.c_of_b = r.local_case == LocalCase::RegularC || r.local_case == LocalCase::UniqueOdd ||
               r.local_case == LocalCase::TwoBranches;
    return r;
}

int allowed_side(const DegeneracyReport& report) { return report.sigma1 * report.sigma2; }

double real_root(double z, int p) {
    if (p < 1) throw Error(ErrorKind::InvalidArgument, "root order must be positive");
    if (p == 1) return z;
    if (p % 2 == 1) return std::copysign(std::pow(std::fabs(z), 1.0 / p), z);
    if (z < 0.0) throw Error(ErrorKind::OutsideNeighborhood, "even root of a negative radicand");
    if (p == 2) return std::sqrt(z);
    return std::pow(z, 1.0 / p);
}

// ---------------------------------------------------------------------------

MorseCoordinates::MorseCoordinates(const Problem& p, double b0, double c0, const DegeneracyReport& report, int kmax)
    : split_(g1_g2(p, b0, c0)),
      jet1_(split_.g1.jet(kmax)),
      jet2_(split_.g2.jet(kmax)),
      l_(report.l),
      k_(report.k),
      sigma1_(report.sigma1),
      sigma2_(report.sigma2),
      value_scale_(1.0) {
    if (report.local_case == LocalCase::RegularC || report.local_case == LocalCase::Degenerate) {
        throw Error(ErrorKind::InvalidArgument, "normal-form coordinates need a degenerate, classifiable point");
    }
    if (l_ < 1 || k_ < 1 || sigma1_ == 0 || sigma2_ == 0) {
        throw Error(ErrorKind::InvalidArgument, "report lacks finite orders of vanishing");
    }
    std::array<double, 2> d{};
    derivatives_into(p.f(), c0, d);
    value_scale_ = std::max({1.0, std::fabs(d[1]), std::fabs(p.f_a0()) / (b0 - p.a0())});

    const double length = b0 - p.a0();
    auto fit = [&](auto&& radicand, double lead, double r) {
        for (int halving = 0; halving < 40; ++halving, r *= 0.5) {
            bool ok = true;
            constexpr int kSamples = 64;
            for (int i = 0; i <= kSamples && ok; ++i) {
                const double t = r * (2.0 * i / kSamples - 1.0);
                double q;
                try {
                    q = radicand(t);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::Domain && e.kind() != ErrorKind::EndpointCollision) throw;
                    ok = false;
                    break;
                }
                const double ratio = q / lead;
                ok = ratio >= 0.25 && ratio <= 4.0;
            }
            if (ok) return r;
        }
        throw Error(ErrorKind::OutsideNeighborhood, "no neighborhood keeps the radicand sign");
    };
    x_radius_ = fit([this](double x) { return radicand1(x); }, sigma1_ * jet1_[l_], 0.1 * length);
    y_radius_ = fit([this](double y) { return radicand2(y); }, sigma2_ * jet2_[k_], 0.1 * length);
}

namespace {

double leading_quotient(const Jet& jet, int order, double t) {
    // sum_m t_{order+m} * t^m
    double acc = 0.0;
    for (int j = jet.order(); j >= order; --j) acc = acc * t + jet[j];
    return acc;
}

}  // namespace

double MorseCoordinates::radicand1(double x) const {
    const double lead = jet1_[l_];
    if (std::fabs(lead) * std::pow(std::fabs(x), l_) < 1e-6 * value_scale_) {
        return sigma1_ * leading_quotient(jet1_, l_, x);
    }
    return sigma1_ * split_.g1(x) / std::pow(x, l_);
}

double MorseCoordinates::radicand2(double y) const {
    const double lead = jet2_[k_];
    if (std::fabs(lead) * std::pow(std::fabs(y), k_) < 1e-6 * value_scale_) {
        return sigma2_ * leading_quotient(jet2_, k_, y);
    }
    return sigma2_ * split_.g2(y) / std::pow(y, k_);
}

double MorseCoordinates::u(double x) const {
    const double q = radicand1(x);
    if (!(q > 0.0)) throw Error(ErrorKind::OutsideNeighborhood, "radicand of u is not positive");
    return x * real_root(q, l_);
}

double MorseCoordinates::v(double y) const {
    const double q = radicand2(y);
    if (!(q > 0.0)) throw Error(ErrorKind::OutsideNeighborhood, "radicand of v is not positive");
    return y * real_root(q, k_);
}

namespace {

double invert_increasing(const std::function<double(double)>& g, double target, double radius) {
    double lo = -radius;
    double hi = radius;
    if (target < g(lo) || target > g(hi)) {
        throw Error(ErrorKind::OutsideNeighborhood, "coordinate value outside the certified neighborhood");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) < target) lo = mid;
        else hi = mid;
    }
    return lo + 0.5 * (hi - lo);
}

}  // namespace

double MorseCoordinates::x_of_u(double target) const {
    return invert_increasing([this](double x) { return u(x); }, target, x_radius_);
}

double MorseCoordinates::y_of_v(double target) const {
    return invert_increasing([this](double y) { return v(y); }, target, y_radius_);
}

// ---------------------------------------------------------------------------

ExtremalAbscissa find_extremal_abscissa(const Problem& p, int grid, int kmax) {
    if (grid < 16) throw Error(ErrorKind::InvalidArgument, "grid too small");
    const Problem g = normalize(p);
    const double a0 = g.a0();
    const double b0 = g.b0();
    const double h = (b0 - a0) / grid;
    std::vector<double> values(static_cast<std::size_t>(grid) + 1);
    double peak = 0.0;
    double value_scale = 1.0;
    for (int i = 0; i <= grid; ++i) {
        const double x = i == grid ? b0 : a0 + h * i;
        values[static_cast<std::size_t>(i)] = std::fabs(eval(g.f(), x));
        peak = std::max(peak, values[static_cast<std::size_t>(i)]);
        value_scale = std::max(value_scale, std::fabs(eval(p.f(), x)));
    }
    if (!(peak > 1e-12 * value_scale)) {
        throw Error(ErrorKind::DegenerateProblem, "secant-normalized function vanishes identically");
    }
    auto slope = [&](double x) {
        std::array<double, 2> d{};
        derivatives_into(g.f(), x, d);
        return d[1];
    };
    auto at = [&](int i) { return i == grid ? b0 : a0 + h * i; };
    auto bisect = [&](double lo, double hi, double slo) {
        for (int it = 0; it < 200; ++it) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            const double sm = slope(mid);
            if (sm == 0.0) return mid;
            if (std::signbit(sm) == std::signbit(slo)) {
                lo = mid;
                slo = sm;
            } else {
                hi = mid;
            }
        }
        return std::fabs(slope(lo)) <= std::fabs(slope(hi)) ? lo : hi;
    };
    auto golden_max = [&](double lo, double hi) {
        constexpr double kInvPhi = 0.6180339887498949;
        auto m = [&](double x) { return std::fabs(eval(g.f(), x)); };
        double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
        double f1 = m(x1), f2 = m(x2);
        for (int it = 0; it < 200 && x2 - x1 > 0.0; ++it) {
            if (f1 >= f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - kInvPhi * (hi - lo); f1 = m(x1);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + kInvPhi * (hi - lo); f2 = m(x2);
            }
        }
        return f1 >= f2 ? x1 : x2;
    };
    auto refine = [&](int i) {
        const double xl = at(i - 1), xm = at(i), xr = at(i + 1);
        const double sl = slope(xl), sm = slope(xm), sr = slope(xr);
        if (sm == 0.0) return xm;
        if (sl != 0.0 && std::signbit(sl) != std::signbit(sm)) return bisect(xl, xm, sl);
        if (sr != 0.0 && std::signbit(sr) != std::signbit(sm)) return bisect(xm, xr, sm);
        if (sl == 0.0) return xl;
        if (sr == 0.0) return xr;
        return golden_max(xl, xr);
    };

    // Every grid local maximum near the peak is refined; the largest wins, ties to the smallest c.
    std::vector<std::pair<double, double>> found;  // (|g|, c)
    for (int i = 1; i < grid; ++i) {
        const double v = values[static_cast<std::size_t>(i)];
        if (v < peak * (1.0 - 1e-6) || v < values[static_cast<std::size_t>(i - 1)] ||
            v < values[static_cast<std::size_t>(i + 1)]) {
            continue;
        }
        const double c = refine(i);
        found.emplace_back(std::fabs(eval(g.f(), c)), c);
    }
    double top = 0.0;
    for (const auto& f : found) top = std::max(top, f.first);
    double c0 = found.front().second;
    bool have = false;
    for (const auto& [m, c] : found) {
        if (m >= top * (1.0 - 1e-12) && (!have || c < c0)) {
            c0 = c;
            have = true;
        }
    }

    const SplitFunction g2(g, b0, c0, SplitFunction::Side::Abscissa);
    const auto k = scaled_order(g2.jet(kmax), b0 - a0);
    if (!k) throw Error(ErrorKind::DegenerateProblem, "no finite order of vanishing at the extremum");
    return ExtremalAbscissa{c0, *k};
}

GuaranteedBranch guaranteed_branch(const Problem& p, std::optional<Interval> b_range, const TraceConfig& config) {
    const ExtremalAbscissa ext = find_extremal_abscissa(p, 4096, config.kmax);
    GuaranteedBranch out;
    out.c0 = ext.c0;
    out.k = ext.k;
    out.report = classify_point(p, p.b0(), ext.c0, config.kmax, config.tol);
    const double length = p.b0() - p.a0();
    Interval range = b_range.value_or(Interval{p.b0() - 0.2 * length, p.b0() + 0.2 * length});
    range.hi = std::min(range.hi, p.domain().hi);
    range.lo = std::max(range.lo, p.a0() + 1e-6 * length);
    out.branch = trace_c_of_b(p, p.b0(), ext.c0, range, config);
    return out;
}

}  // namespace mva
