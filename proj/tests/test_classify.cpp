#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "mva/classify.hpp"
#include "mva/error.hpp"
#include "oracles.hpp"

using namespace mva;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an mva::Error";
    return ErrorKind::InvalidArgument;
}

Problem make(const std::string& f, double a0, double b0, double hi) { return Problem(parse(f), a0, b0, Interval{a0, hi}); }

Problem make(const corpus::DegeneratePoint& d) { return make(d.function, d.a0, d.b0, d.b0 + 0.5); }

}  // namespace

TEST(LocalCaseNames, RoundTrip) {
    for (LocalCase c : {LocalCase::RegularC, LocalCase::RegularBOnly, LocalCase::TwoBranches, LocalCase::Isolated,
                        LocalCase::OneSided, LocalCase::UniqueOdd, LocalCase::Degenerate}) {
        EXPECT_EQ(local_case_from_string(to_string(c)), c);
    }
    EXPECT_EQ(to_string(LocalCase::UniqueOdd), "UNIQUE_ODD");
    EXPECT_EQ(kind_of([] { local_case_from_string("nope"); }), ErrorKind::InvalidArgument);
}

TEST(ClassifyPoint, ParabolaIsRegular) {
    const DegeneracyReport r = classify_point(make(corpus::kParabola, 0.0, 2.0, 4.0), 2.0, 1.0);
    EXPECT_EQ(r.local_case, LocalCase::RegularC);
    EXPECT_EQ(r.k, 1);
    EXPECT_EQ(r.l, 1);
    EXPECT_DOUBLE_EQ(r.second_derivative_c0, -2.0);
    EXPECT_TRUE(r.c_of_b);
    EXPECT_TRUE(r.b_of_c);
}

TEST(ClassifyPoint, QuarticIsUniqueOdd) {
    const DegeneracyReport r = classify_point(make("x^4", -1.0, 1.0, 1.5), 1.0, 0.0);
    EXPECT_EQ(r.local_case, LocalCase::UniqueOdd);
    EXPECT_EQ(r.k, 3);
    EXPECT_EQ(r.l, 1);
    EXPECT_DOUBLE_EQ(r.beta0, 4.0);
    EXPECT_DOUBLE_EQ(r.alpha0, 2.0);
    EXPECT_EQ(r.sigma1, 1);
    EXPECT_EQ(r.sigma2, 1);
}

TEST(ClassifyPoint, ConstructedPolynomials) {
    struct Want {
        std::string f;
        LocalCase c;
        int k, l, s1, s2;
    };
    const Want wants[] = {
        {corpus::kTwoBranches, LocalCase::TwoBranches, 2, 2, 1, 1},
        {corpus::kIsolated, LocalCase::Isolated, 2, 2, -1, 1},
        {corpus::kInflection, LocalCase::RegularBOnly, 2, 1, 1, -1},
        {corpus::kOneSided, LocalCase::OneSided, 2, 3, 1, 1},
    };
    for (const Want& w : wants) {
        const DegeneracyReport r = classify_point(make(w.f, 0.0, 3.0, 3.5), 3.0, 1.0);
        EXPECT_EQ(r.local_case, w.c) << w.f;
        EXPECT_EQ(r.k, w.k) << w.f;
        EXPECT_EQ(r.l, w.l) << w.f;
        EXPECT_EQ(r.sigma1, w.s1) << w.f;
        EXPECT_EQ(r.sigma2, w.s2) << w.f;
        EXPECT_NEAR(r.second_derivative_c0, 0.0, 1e-12);
    }
}

TEST(ClassifyPoint, InflectionAbscissaKeepsBofC) {
    const DegeneracyReport r = classify_point(make(corpus::kInflection, 0.0, 3.0, 3.5), 3.0, 1.0);
    EXPECT_FALSE(r.c_of_b);
    EXPECT_TRUE(r.b_of_c);
    EXPECT_TRUE(is_nonzero(r.slope_gap, 1.0));
}

TEST(ClassifyPoint, NotASolution) {
    EXPECT_EQ(kind_of([] { classify_point(make(corpus::kParabola, 0.0, 2.0, 4.0), 2.0, 1.01); }),
              ErrorKind::NotASolution);
}

TEST(ClassifyPoint, LinearFunctionIsDegenerate) {
    const DegeneracyReport r = classify_point(make("2*x + 1", 0.0, 1.0, 1.0), 1.0, 0.5);
    EXPECT_EQ(r.local_case, LocalCase::Degenerate);
    EXPECT_EQ(r.k, 0);
}

TEST(ClassifyPoint, HighOrderBeyondKmaxIsDegenerate) {
    // f' = (x - 1)^19 + const near c0 = 1 is flat past kmax = 16.
    const Problem p = make("(x - 1)^20 / 20", 0.0, 2.0, 2.0);
    const DegeneracyReport r = classify_point(p, 2.0, 1.0, 16, 1e-10);
    EXPECT_EQ(r.local_case, LocalCase::Degenerate);
    const DegeneracyReport deeper = classify_point(p, 2.0, 1.0, 24, 1e-10);
    EXPECT_EQ(deeper.k, 19);
    EXPECT_EQ(deeper.local_case, LocalCase::UniqueOdd);
}

TEST(ClassifyPoint, KMatchesShiftedDerivativeJet) {
    for (const auto& d : corpus::degenerate_points()) {
        const Problem p = make(d);
        const DegeneracyReport r = classify_point(p, d.b0, d.c0);
        const Jet fj = jet_eval(p.f(), d.c0, kDefaultKmax + 2);
        std::vector<double> second(kDefaultKmax + 1);
        for (int j = 0; j <= kDefaultKmax; ++j) second[j] = (j + 1) * (j + 2) * fj[j + 2];
        const auto ord = order_of_vanishing(Jet(d.c0, second));
        ASSERT_TRUE(ord.has_value());
        EXPECT_EQ(r.k, 1 + *ord) << d.name;
    }
}

TEST(ClassifyPoint, LFromFDerivativesWhenEndpointsLevel) {
    // With f(a0) = f(b0) the secant is flat; l is the first j >= 1 with f^(j)(b0) != 0
    // and alpha0 = f^(l)(b0) / (l! (b0 - a0)).
    for (const auto& d : corpus::degenerate_points()) {
        const Problem p = make(d);
        if (std::fabs(eval(p.f(), d.b0) - p.f_a0()) > 1e-12) continue;
        const DegeneracyReport r = classify_point(p, d.b0, d.c0);
        const Jet fb = jet_eval(p.f(), d.b0, 10);
        int l = 1;
        while (l < 10 && std::fabs(fb[l]) < 1e-9) ++l;
        EXPECT_EQ(r.l, l) << d.name;
        EXPECT_NEAR(r.alpha0, fb[l] / (d.b0 - d.a0), 1e-10 * std::fabs(r.alpha0)) << d.name;
    }
}

TEST(AllowedSide, SignProduct) {
    DegeneracyReport r;
    r.sigma1 = -1;
    r.sigma2 = 1;
    EXPECT_EQ(allowed_side(r), -1);
    r.sigma1 = -1;
    r.sigma2 = -1;
    EXPECT_EQ(allowed_side(r), 1);
}

TEST(RealRoot, OddAndEvenOrders) {
    EXPECT_NEAR(real_root(-27.0, 3), -3.0, 1e-15);
    EXPECT_NEAR(real_root(16.0, 4), 2.0, 1e-15);
    EXPECT_EQ(real_root(-2.5, 1), -2.5);
    EXPECT_EQ(kind_of([] { real_root(-1.0, 2); }), ErrorKind::OutsideNeighborhood);
}

TEST(Morse, QuarticCoordinatesAreLinear) {
    const Problem p = make("x^4", -1.0, 1.0, 1.5);
    const DegeneracyReport r = classify_point(p, 1.0, 0.0);
    const MorseCoordinates m(p, 1.0, 0.0, r);
    for (double y : {-0.05, -0.01, 0.0, 0.02, 0.04}) {
        if (std::fabs(y) > m.y_radius()) continue;
        EXPECT_NEAR(m.v(y), std::cbrt(4.0) * y, 1e-14);
    }
    // l = 1: u is sigma1 * g1 itself.
    for (double x : {-0.03, 0.01, 0.02}) EXPECT_NEAR(m.u(x), m.sigma1() * m.g1(x), 1e-14);
}

TEST(Morse, IdentityOnLocalGridsForEveryDegeneratePoint) {
    for (const auto& d : corpus::degenerate_points()) {
        const Problem p = make(d);
        const DegeneracyReport r = classify_point(p, d.b0, d.c0);
        const MorseCoordinates m(p, d.b0, d.c0, r);
        double scale = 1.0;
        constexpr int n = 50;
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = m.x_radius() * (2.0 * i / (n - 1) - 1.0);
            ys[i] = m.y_radius() * (2.0 * i / (n - 1) - 1.0);
            scale = std::max({scale, std::fabs(m.g1(xs[i])), std::fabs(m.g2(ys[i]))});
        }
        double worst = 0.0;
        for (double x : xs) {
            const double ul = std::pow(m.u(x), m.l());
            for (double y : ys) {
                const double lhs = m.sigma1() * ul - m.sigma2() * std::pow(m.v(y), m.k());
                worst = std::max(worst, std::fabs(lhs - (m.g1(x) - m.g2(y))));
            }
        }
        EXPECT_LE(worst, 1e-10 * scale) << d.name;
        // Derivatives at the origin.
        const double h = 1e-7;
        EXPECT_NEAR((m.u(h) - m.u(-h)) / (2 * h), std::pow(m.sigma1() * r.alpha0, 1.0 / m.l()), 1e-5) << d.name;
        EXPECT_NEAR((m.v(h) - m.v(-h)) / (2 * h), std::pow(m.sigma2() * r.beta0, 1.0 / m.k()), 1e-5) << d.name;
        // Inverses.
        for (double x : {xs[5], xs[30], 0.0}) EXPECT_NEAR(m.x_of_u(m.u(x)), x, 1e-10) << d.name;
        for (double y : {ys[7], ys[44]}) EXPECT_NEAR(m.y_of_v(m.v(y)), y, 1e-10) << d.name;
    }
}

TEST(Morse, RejectsRegularPoints) {
    const Problem p = make(corpus::kParabola, 0.0, 2.0, 4.0);
    const DegeneracyReport r = classify_point(p, 2.0, 1.0);
    EXPECT_EQ(kind_of([&] { MorseCoordinates(p, 2.0, 1.0, r); }), ErrorKind::InvalidArgument);
}

TEST(Morse, OutsideTheNeighborhood) {
    const corpus::DegeneratePoint d = corpus::degenerate_points()[1];
    const Problem p = make(d);
    const MorseCoordinates m(p, d.b0, d.c0, classify_point(p, d.b0, d.c0));
    EXPECT_EQ(kind_of([&] { m.x_of_u(1e6); }), ErrorKind::OutsideNeighborhood);
}

TEST(ExtremalAbscissa, Examples) {
    const ExtremalAbscissa par = find_extremal_abscissa(make(corpus::kParabola, 0.0, 2.0, 2.0));
    EXPECT_NEAR(par.c0, 1.0, 1e-12);
    EXPECT_EQ(par.k, 1);
    const ExtremalAbscissa quart = find_extremal_abscissa(make("x^4", -1.0, 1.0, 1.0));
    EXPECT_NEAR(quart.c0, 0.0, 1e-12);
    EXPECT_EQ(quart.k, 3);
    const ExtremalAbscissa cub = find_extremal_abscissa(make(corpus::kCubic, 0.0, 3.0, 3.0));
    EXPECT_NEAR(cub.c0, 2.0, 1e-12);
    EXPECT_EQ(cub.k, 1);
    EXPECT_EQ(kind_of([] { find_extremal_abscissa(make("3*x - 1", 0.0, 1.0, 1.0)); }), ErrorKind::DegenerateProblem);
}

TEST(ExtremalAbscissa, OrderIsOddOnCorpus) {
    for (const auto& e : corpus::problems()) {
        const Problem p = make(e.function, e.a0, e.b0, e.domain_hi);
        const ExtremalAbscissa x = find_extremal_abscissa(p);
        EXPECT_EQ(x.k % 2, 1) << e.name;
        EXPECT_GT(x.c0, e.a0);
        EXPECT_LT(x.c0, e.b0);
        EXPECT_LE(std::fabs(big_f_value(p, e.b0, x.c0)), 1e-10) << e.name;
    }
}

TEST(ExtremalAbscissa, TiesGoToTheSmallestAbscissa) {
    // g = (x^2 - 1)^2 - 9 on [-2, 2]: |g| peaks at both -1 and 1.
    const ExtremalAbscissa x = find_extremal_abscissa(make("(x^2 - 1)^2", -2.0, 2.0, 2.0));
    EXPECT_NEAR(x.c0, -1.0, 1e-9);
    EXPECT_EQ(x.k, 1);
    const ExtremalAbscissa sym = find_extremal_abscissa(make("sin(x)", 0.0, 4 * std::acos(-1.0), 20.0));
    EXPECT_NEAR(sym.c0, std::acos(-1.0) / 2, 1e-9);
}

TEST(GuaranteedBranch, ParabolaQuarticCubic) {
    const GuaranteedBranch par = guaranteed_branch(make(corpus::kParabola, 0.0, 2.0, 4.0));
    EXPECT_NEAR(par.c0, 1.0, 1e-12);
    EXPECT_EQ(par.report.local_case, LocalCase::RegularC);
    for (const auto& pt : par.branch.points) EXPECT_NEAR(pt.c, pt.b / 2, 1e-10);

    const GuaranteedBranch q = guaranteed_branch(make("x^4", -1.0, 1.0, 1.5));
    EXPECT_EQ(q.k, 3);
    EXPECT_EQ(q.report.local_case, LocalCase::UniqueOdd);
    ASSERT_GT(q.branch.points.size(), 10u);
    for (const auto& pt : q.branch.points) EXPECT_NEAR(pt.c, oracle::quartic_branch(pt.b), 1e-7);

    const GuaranteedBranch c = guaranteed_branch(make(corpus::kCubic, 0.0, 3.0, 3.5));
    EXPECT_NEAR(c.c0, 2.0, 1e-12);
    for (const auto& pt : c.branch.points) EXPECT_NEAR(pt.c, oracle::cubic_upper(pt.b), 1e-8);
}
