#include "mva/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "mva/error.hpp"
#include "mva/numfmt.hpp"

namespace mva {

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::RangeExhausted: return "range_exhausted";
        case StopReason::DegenerateFc: return "degenerate_fc";
        case StopReason::DomainEdge: return "domain_edge";
        case StopReason::CorrectorFailure: return "corrector_failure";
    }
    return "range_exhausted";
}

std::string_view to_string(BranchParameter p) { return p == BranchParameter::CofB ? "c_of_b" : "b_of_c"; }

namespace {

// A branch is traced in (s, t): s is the parameter, t the solved variable.
struct RolePartials {
    double value;
    double ds;
    double dt;
};

struct Roles {
    const Problem* p;
    bool c_of_b;

    double b(double s, double t) const { return c_of_b ? s : t; }
    double c(double s, double t) const { return c_of_b ? t : s; }

    RolePartials eval(double s, double t) const {
        const Partials q = big_f(*p, b(s, t), c(s, t));
        return c_of_b ? RolePartials{q.value, q.dx, q.dy} : RolePartials{q.value, q.dy, q.dx};
    }
    double value(double s, double t) const { return big_f_value(*p, b(s, t), c(s, t)); }

    bool interior(double s, double t) const {
        const double bb = b(s, t);
        const double cc = c(s, t);
        return p->a0() < cc && cc < bb && bb <= p->domain().hi;
    }
};

struct Step {
    double s;
    double t;
};

class Tracer {
public:
    Tracer(const Problem& p, bool c_of_b, bool bisection, const TraceConfig& config, double step)
        : roles_{&p, c_of_b}, bisection_(bisection), config_(config), step_(step),
          threshold_(config.degeneracy * p.scale()) {}

    // Walks from the seed toward `end`; returns accepted points in walk order.
    std::vector<SolutionPoint> walk(double s0, double t0, double end, StopReason& stop) const {
        std::vector<SolutionPoint> out;
        const double dir = end > s0 ? 1.0 : -1.0;
        double s = s0;
        double t = t0;
        std::optional<Step> prev;
        const double eps_s = 1e-9 * step_;
        while (true) {
            if (dir * (end - s) <= eps_s) {
                stop = StopReason::RangeExhausted;
                return out;
            }
            const double target = dir * (end - s) <= step_ + eps_s ? end : s + dir * step_;
            std::optional<Step> next;
            bool edge = false;
            bool degenerate = false;
            double s_next = target;
            for (int attempt = 0; attempt < 2 && !next; ++attempt, s_next = s + 0.5 * (s_next - s)) {
                degenerate = false;
                edge = false;
                next = advance(s, t, prev, s_next, edge, degenerate);
            }
            if (!next && edge) {
                stop = StopReason::DomainEdge;
                return out;
            }
            if (!next) {
                stop = degenerate ? StopReason::DegenerateFc : StopReason::CorrectorFailure;
                return out;
            }
            out.push_back(point(*next));
            prev = Step{s, t};
            s = next->s;
            t = next->t;
            if (!bisection_ && std::fabs(roles_.eval(s, t).dt) < threshold_) {
                stop = StopReason::DegenerateFc;
                return out;
            }
        }
    }

    SolutionPoint point(Step st) const {
        const double b = roles_.b(st.s, st.t);
        const double c = roles_.c(st.s, st.t);
        return SolutionPoint{b, c, std::fabs(big_f_value(*roles_.p, b, c))};
    }

private:
    std::optional<Step> advance(double s, double t, const std::optional<Step>& prev, double s_next, bool& edge,
                                bool& degenerate) const {
        try {
            const RolePartials here = roles_.eval(s, t);
            double t_pred;
            if (bisection_) {
                t_pred = prev && prev->s != s ? t + (t - prev->t) / (s - prev->s) * (s_next - s) : t;
            } else {
                t_pred = t - here.ds / here.dt * (s_next - s);
            }
            if (!roles_.interior(s_next, t_pred) || (roles_.c_of_b && s_next > roles_.p->domain().hi)) {
                edge = true;
                return std::nullopt;
            }
            std::optional<double> t_new = bisection_ ? bisect(s_next, t_pred) : contract(s_next, t_pred, t, degenerate, edge);
            if (!t_new) return std::nullopt;
            if (!roles_.interior(s_next, *t_new)) {
                edge = true;
                return std::nullopt;
            }
            if (!(std::fabs(roles_.value(s_next, *t_new)) <= config_.tol)) return std::nullopt;
            return Step{s_next, *t_new};
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Domain || e.kind() == ErrorKind::EndpointCollision) {
                edge = true;
            }
            return std::nullopt;
        }
    }

    std::optional<double> contract(double s, double t_pred, double t_prev, bool& degenerate, bool& edge) const {
        const double fy0 = roles_.eval(s, t_pred).dt;
        if (!(std::fabs(fy0) >= threshold_)) {
            degenerate = true;
            return std::nullopt;
        }
        const double rho = config_.solver.rho;
        auto k = [&](double t) { return t - roles_.value(s, t) / fy0; };
        const double offset = std::fabs(k(t_pred) - t_pred);
        double eps = std::max({4.0 * std::fabs(t_pred - t_prev), 4.0 * offset / (1.0 - rho),
                               1e-9 * std::max(1.0, std::fabs(t_pred))});
        constexpr int kSamples = 64;
        for (int halving = 0; halving < 12; ++halving, eps *= 0.5) {
            if (offset > eps * (1.0 - rho)) return std::nullopt;
            bool ok = true;
            for (int i = 0; i <= kSamples && ok; ++i) {
                const double t = t_pred - eps + 2.0 * eps * i / kSamples;
                if (!roles_.interior(s, t)) {
                    edge = true;
                    ok = false;
                    break;
                }
                ok = std::fabs(1.0 - roles_.eval(s, t).dt / fy0) <= rho;
            }
            if (!ok) continue;
            const FixedPointResult r = fixed_point(k, Interval{t_pred - eps, t_pred + eps}, rho, config_.solver.tol,
                                                   config_.solver.max_iter, t_pred);
            return r.y_star;
        }
        return std::nullopt;
    }

    // Derivative-free corrector for c at fixed b.
    std::optional<double> bisect(double s, double t_pred) const {
        const double a0 = roles_.p->a0();
        const double cap = 0.25 * (s - a0);
        auto g = [&](double t) { return roles_.value(s, t); };
        const double floor_c = a0 + 1e-12 * (s - a0);
        const double ceil_c = s - 1e-12 * (s - a0);
        t_pred = std::clamp(t_pred, floor_c, ceil_c);
        const double g0 = g(t_pred);
        if (g0 == 0.0) return t_pred;
        for (double w = std::max(step_, 1e-9 * (s - a0)); w <= 2.0 * cap; w *= 2.0) {
            const double lo_edge = std::max(floor_c, t_pred - w);
            const double hi_edge = std::min(ceil_c, t_pred + w);
            const double glo = g(lo_edge);
            const double ghi = g(hi_edge);
            // Nearest bracket to the prediction wins.
            std::optional<std::pair<double, double>> bracket;
            if (glo == 0.0) return lo_edge;
            if (ghi == 0.0) return hi_edge;
            const bool left = std::signbit(glo) != std::signbit(g0);
            const bool right = std::signbit(ghi) != std::signbit(g0);
            if (left && right) {
                if (t_pred - lo_edge <= hi_edge - t_pred) bracket = std::make_pair(lo_edge, t_pred);
                else bracket = std::make_pair(t_pred, hi_edge);
            } else if (left) {
                bracket = std::make_pair(lo_edge, t_pred);
            } else if (right) {
                bracket = std::make_pair(t_pred, hi_edge);
            }
            if (bracket) {
                double lo = bracket->first;
                double hi = bracket->second;
                double flo = g(lo);
                for (int it = 0; it < 200; ++it) {
                    const double mid = lo + 0.5 * (hi - lo);
                    if (mid <= lo || mid >= hi) break;
                    const double fm = g(mid);
                    if (fm == 0.0) return mid;
                    if (std::signbit(fm) == std::signbit(flo)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return std::fabs(g(lo)) <= std::fabs(g(hi)) ? lo : hi;
            }
            if (lo_edge == floor_c && hi_edge == ceil_c) break;
        }
        return std::nullopt;
    }

    Roles roles_;
    bool bisection_;
    TraceConfig config_;
    double step_;
    double threshold_;
};

double default_step(const Problem& p, double b0, const TraceConfig& config) {
    if (config.step < 0.0 || !std::isfinite(config.step)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
    return config.step > 0.0 ? config.step : 0.01 * (b0 - p.a0());
}

Branch assemble(const Tracer& tracer, BranchParameter param, double s0, double t0, Interval range, LocalCase seed_case) {
    Branch br;
    br.parameter = param;
    br.seed_case = seed_case;
    std::vector<SolutionPoint> low = tracer.walk(s0, t0, range.lo, br.stop_low);
    std::vector<SolutionPoint> high = tracer.walk(s0, t0, range.hi, br.stop_high);
    br.points.reserve(low.size() + high.size() + 1);
    for (auto it = low.rbegin(); it != low.rend(); ++it) br.points.push_back(*it);
    br.seed_index = br.points.size();
    br.points.push_back(tracer.point(Step{s0, t0}));
    br.points.insert(br.points.end(), high.begin(), high.end());
    return br;
}

void check_range(Interval range, double seed, const char* what) {
    if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.lo <= range.hi)) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " range must be a finite interval");
    }
    if (!range.contains(seed)) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " range does not contain the seed");
    }
}

}  // namespace

Branch trace_c_of_b(const Problem& p, double b0, double c0, Interval b_range, const TraceConfig& config) {
    check_range(b_range, b0, "b");
    validate(config.solver);
    const DegeneracyReport report = classify_point(p, b0, c0, config.kmax, config.tol);
    if (report.local_case != LocalCase::RegularC && report.local_case != LocalCase::UniqueOdd) {
        throw Error(ErrorKind::SeedNotRegular, "c = C(b) is not available at a " +
                                                   std::string(to_string(report.local_case)) + " seed");
    }
    (void)SolutionPoint::validated(p, b0, c0, config.tol);
    const Tracer tracer(p, true, report.local_case == LocalCase::UniqueOdd, config, default_step(p, b0, config));
    return assemble(tracer, BranchParameter::CofB, b0, c0, b_range, report.local_case);
}

Branch trace_b_of_c(const Problem& p, double b0, double c0, Interval c_range, const TraceConfig& config) {
    check_range(c_range, c0, "c");
    validate(config.solver);
    const DegeneracyReport report = classify_point(p, b0, c0, config.kmax, config.tol);
    const Partials q = big_f(p, b0, c0);
    if (report.l != 1 || !is_nonzero(q.dx * (b0 - p.a0()), p.scale())) {
        throw Error(ErrorKind::SeedNotRegular, "f'(b0) = f'(c0) at the seed; b = B(c) is not available");
    }
    (void)SolutionPoint::validated(p, b0, c0, config.tol);
    const Tracer tracer(p, false, false, config, default_step(p, b0, config));
    return assemble(tracer, BranchParameter::BofC, c0, b0, c_range, report.local_case);
}

std::vector<SolutionPoint> branch_seeds_after_degeneracy(const Problem& p, double b0, double c0,
                                                         const DegeneracyReport& report, double step0, double tol) {
    if (!(step0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "step0 must be positive");
    int side = 0;
    switch (report.local_case) {
        case LocalCase::TwoBranches: side = 1; break;
        case LocalCase::OneSided:
        case LocalCase::RegularBOnly: side = allowed_side(report); break;
        default:
            throw Error(ErrorKind::InvalidArgument, "no branches leave a " + std::string(to_string(report.local_case)) +
                                                        " point");
    }
    const double b = b0 + side * step0;
    if (!(b > p.a0()) || b > p.domain().hi) throw Error(ErrorKind::SeedSearchFailed, "seed b leaves the domain");
    const double reach = 0.25 * std::max(1.0, std::fabs(c0));
    auto g = [&](double c) { return big_f_value(p, b, c); };
    const double g0 = g(c0);
    if (g0 == 0.0) throw Error(ErrorKind::SeedSearchFailed, "c0 itself solves F at the seed b");

    auto search = [&](double dir) -> SolutionPoint {
        const double limit = dir > 0 ? std::min(c0 + reach, b) : std::max(c0 - reach, p.a0());
        constexpr int kGrid = 1024;
        double prev = c0;
        double gprev = g0;
        for (int i = 1; i <= kGrid; ++i) {
            double c = c0 + (limit - c0) * i / kGrid;
            if (i == kGrid) c = limit - dir * 1e-12 * (b - p.a0());
            const double gc = g(c);
            if (gc == 0.0 || std::signbit(gc) != std::signbit(gprev)) {
                double lo = std::min(prev, c);
                double hi = std::max(prev, c);
                double flo = lo == prev ? gprev : gc;
                if (gc == 0.0) return SolutionPoint::validated(p, b, c, tol);
                for (int it = 0; it < 200; ++it) {
                    const double mid = lo + 0.5 * (hi - lo);
                    if (mid <= lo || mid >= hi) break;
                    const double fm = g(mid);
                    if (fm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if (std::signbit(fm) == std::signbit(flo)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                const double root = std::fabs(g(lo)) <= std::fabs(g(hi)) ? lo : hi;
                return SolutionPoint::validated(p, b, root, tol);
            }
            prev = c;
            gprev = gc;
        }
        throw Error(ErrorKind::SeedSearchFailed, "no sign change of F(" + format_number(b) + ", .) " +
                                                     (dir > 0 ? "above" : "below") + " c0");
    };
    return {search(-1.0), search(1.0)};
}

}  // namespace mva
