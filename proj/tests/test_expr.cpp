#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include "mva/error.hpp"
#include "mva/expr.hpp"
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

std::size_t count_kind(const ExprNode& n, NodeKind k) {
    std::size_t c = n.kind == k ? 1 : 0;
    if (n.lhs) c += count_kind(*n.lhs, k);
    if (n.rhs) c += count_kind(*n.rhs, k);
    return c;
}

}  // namespace

// --- parse ---

TEST(Parse, CubicHasThreePowerTerms) {
    const Expr f = parse("x^3 - 3*x^2 + 2*x");
    EXPECT_EQ(count_kind(f.root(), NodeKind::Pow), 2u);
    EXPECT_EQ(count_kind(f.root(), NodeKind::Variable), 3u);
    EXPECT_EQ(eval(f, 2.0), 0.0);
}

TEST(Parse, VariableAlone) {
    const Expr f = parse("x");
    EXPECT_EQ(f.root().kind, NodeKind::Variable);
    EXPECT_EQ(f.node_count(), 1u);
}

TEST(Parse, DanglingOperatorReportsOffset) {
    try {
        parse("2*");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Syntax);
        EXPECT_EQ(e.offset(), 2u);
    }
}

TEST(Parse, UnknownIdentifier) {
    EXPECT_EQ(kind_of([] { parse("tan(x)"); }), ErrorKind::UnknownIdentifier);
    EXPECT_EQ(kind_of([] { parse("y + 1"); }), ErrorKind::UnknownIdentifier);
}

TEST(Parse, MalformedNumber) {
    EXPECT_EQ(kind_of([] { parse("1.2.3"); }), ErrorKind::MalformedNumber);
    EXPECT_EQ(kind_of([] { parse("3x"); }), ErrorKind::MalformedNumber);
}

TEST(Parse, SyntaxErrors) {
    EXPECT_EQ(kind_of([] { parse(""); }), ErrorKind::Syntax);
    EXPECT_EQ(kind_of([] { parse("(x"); }), ErrorKind::Syntax);
    EXPECT_EQ(kind_of([] { parse("x)"); }), ErrorKind::Syntax);
    EXPECT_EQ(kind_of([] { parse("sin x"); }), ErrorKind::Syntax);
    EXPECT_EQ(kind_of([] { parse("--x"); }), ErrorKind::Syntax);
}

TEST(Parse, PrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(eval(parse("2^3^2"), 0.0), 512.0);
    EXPECT_DOUBLE_EQ(eval(parse("-x^2"), 3.0), -9.0);
    EXPECT_DOUBLE_EQ(eval(parse("1 - 2 - 3"), 0.0), -4.0);
    EXPECT_DOUBLE_EQ(eval(parse("8 / 4 / 2"), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(eval(parse(" 2 * ( x + 1 ) "), 1.0), 4.0);
    EXPECT_DOUBLE_EQ(eval(parse("1.5e1 + 2E-1"), 0.0), 15.2);
    EXPECT_DOUBLE_EQ(eval(parse("x^-1"), 4.0), 0.25);
}

TEST(Parse, PrintRoundTrip) {
    const char* corpus[] = {"x^3 - 3*x^2 + 2*x", "-x^2+2*x", "sin(x)*cos(x)/(1+x^2)", "exp(-x)*log(x+2)",
                            "sqrt(x)^3 - (x - 1)^(1/3)", "-(-x)", "2^3^2", "(2^3)^2", "x - (x - 1)",
                            "x/(x/2)", "-3.25e-7*x + 1e20", "x^(-2)"};
    for (const char* s : corpus) {
        const Expr a = parse(s);
        const Expr b = parse(print(a));
        EXPECT_TRUE(a == b) << s << " -> " << print(a);
    }
}

// --- eval ---

TEST(Eval, SpotValues) {
    EXPECT_EQ(eval(parse("x^3 - 3*x^2 + 2*x"), 1.0), 0.0);
    EXPECT_EQ(eval(parse("-x^2 + 2*x"), 1.0), 1.0);
}

TEST(Eval, DomainErrorsNameTheSubexpression) {
    try {
        eval(parse("1/x"), 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Domain);
        EXPECT_NE(std::string(e.what()).find("1/x"), std::string::npos) << e.what();
    }
    EXPECT_EQ(kind_of([] { eval(parse("log(x - 1)"), 0.5); }), ErrorKind::Domain);
    EXPECT_EQ(kind_of([] { eval(parse("sqrt(x)"), -1.0); }), ErrorKind::Domain);
    EXPECT_EQ(kind_of([] { eval(parse("x^0.5"), -1.0); }), ErrorKind::Domain);
}

TEST(Eval, OddRootsAcceptNegativeBase) {
    EXPECT_NEAR(eval(parse("x^(1/3)"), -8.0), -2.0, 1e-15);
    EXPECT_NEAR(eval(parse("x^(2/3)"), -8.0), 4.0, 1e-14);
}

TEST(Eval, ConcurrentEvaluationIsSafe) {
    const Expr f = parse("sin(x)*exp(x/3) - x^5/7");
    std::vector<double> expected(200);
    for (int i = 0; i < 200; ++i) expected[i] = eval(f, 0.01 * i);
    std::vector<std::thread> pool;
    std::vector<int> bad(8, 0);
    for (int t = 0; t < 8; ++t) {
        pool.emplace_back([&, t] {
            for (int rep = 0; rep < 50; ++rep)
                for (int i = 0; i < 200; ++i) {
                    if (eval(f, 0.01 * i) != expected[i]) ++bad[t];
                    const Jet j = jet_eval(f, 0.01 * i, 6);
                    if (j[0] != expected[i]) ++bad[t];
                }
        });
    }
    for (auto& th : pool) th.join();
    for (int b : bad) EXPECT_EQ(b, 0);
}

// --- jets ---

TEST(JetEval, SineMaclaurin) {
    const Jet j = jet_eval(parse("sin(x)"), 0.0, 5);
    const double want[] = {0, 1, 0, -1.0 / 6, 0, 1.0 / 120};
    for (int i = 0; i <= 5; ++i) EXPECT_NEAR(j[i], want[i], 1e-16) << i;
}

TEST(JetEval, QuarticAtZero) {
    const Jet j = jet_eval(parse("x^4"), 0.0, 4);
    const double want[] = {0, 0, 0, 0, 1};
    for (int i = 0; i <= 4; ++i) EXPECT_EQ(j[i], want[i]);
}

TEST(JetEval, CubicAtTwo) {
    const Jet j = jet_eval(parse("x^3 - 3*x^2 + 2*x"), 2.0, 2);
    EXPECT_NEAR(j[0], 0.0, 1e-15);
    EXPECT_NEAR(j[1], 2.0, 1e-15);
    EXPECT_NEAR(j[2], 3.0, 1e-15);
}

TEST(JetEval, OrderOverflow) {
    EXPECT_EQ(kind_of([] { jet_eval(parse("x"), 0.0, 33); }), ErrorKind::OrderOverflow);
    EXPECT_NO_THROW(jet_eval(parse("x"), 0.0, 32));
}

TEST(JetEval, TranscendentalIdentities) {
    const Jet e = jet_eval(parse("exp(x)"), 0.0, 10);
    double fact = 1.0;
    for (int i = 0; i <= 10; ++i) {
        if (i) fact *= i;
        EXPECT_NEAR(e[i], 1.0 / fact, 1e-16);
    }
    const Jet one = jet_eval(parse("sin(x)^2 + cos(x)^2"), 0.7, 12);
    EXPECT_NEAR(one[0], 1.0, 1e-15);
    for (int i = 1; i <= 12; ++i) EXPECT_NEAR(one[i], 0.0, 1e-13) << i;
    const Jet id = jet_eval(parse("log(exp(x))"), 0.3, 10);
    EXPECT_NEAR(id[1], 1.0, 1e-15);
    for (int i = 2; i <= 10; ++i) EXPECT_NEAR(id[i], 0.0, 1e-13);
    const Jet r = jet_eval(parse("sqrt(x)*sqrt(x) - x"), 2.0, 10);
    for (int i = 0; i <= 10; ++i) EXPECT_NEAR(r[i], 0.0, 1e-13);
}

TEST(JetEval, RandomPolynomialsMatchSymbolicDerivatives) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> deg(0, 8);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const oracle::Poly p = oracle::random_poly(rng, deg(rng));
        const Expr f = parse(p.text());
        for (int pt = 0; pt < 100; ++pt) {
            const double x = xs(rng);
            const Jet j = jet_eval(f, x, 9);
            for (int k = 0; k <= 9; ++k) {
                const double want = p.derivative(x, k);
                const double got = j.derivative(k);
                EXPECT_LE(std::fabs(got - want), 1e-10 * std::max(1.0, std::fabs(want)))
                    << p.text() << " x=" << x << " k=" << k;
            }
        }
    }
}

namespace {

Expr random_tree(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    std::uniform_real_distribution<double> cst(-2.0, 2.0);
    switch (pick(rng)) {
        case 0: return Expr::variable();
        case 1: return Expr::constant(std::round(cst(rng) * 4) / 4);
        case 2: return Expr::unary(NodeKind::Sin, random_tree(rng, depth - 1));
        case 3: return Expr::unary(NodeKind::Cos, random_tree(rng, depth - 1));
        case 4: return Expr::unary(NodeKind::Exp, Expr::constant(0.25) * random_tree(rng, depth - 1));
        case 5: return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
        case 6: return random_tree(rng, depth - 1) - random_tree(rng, depth - 1);
        case 7: return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
        case 8: return random_tree(rng, depth - 1) / (Expr::constant(3.0) + Expr::unary(NodeKind::Sin, random_tree(rng, depth - 1)));
        default: return pow(random_tree(rng, depth - 1), Expr::constant(2.0));
    }
}

}  // namespace

TEST(Jet, TruncationConsistency) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const Expr f = random_tree(rng, 6);
        const double x0 = 0.37;
        Jet big(0, {0}), small(0, {0});
        try {
            big = jet_eval(f, x0, 10);
            small = jet_eval(f, x0, 4);
        } catch (const Error&) {
            continue;
        }
        const Jet cut = big.truncated(4);
        for (int i = 0; i <= 4; ++i) {
            EXPECT_NEAR(cut[i], small[i], 1e-12 * std::max(1.0, std::fabs(small[i]))) << print(f) << " i=" << i;
        }
    }
}

TEST(Jet, ArithmeticTruncatesToTheSmallerOrder) {
    const Jet a = Jet::variable(1.0, 5);
    const Jet b = Jet::constant(1.0, 2.0, 3);
    EXPECT_EQ((a * b).order(), 3);
    EXPECT_THROW(Jet::variable(0.0, 2) + Jet::variable(1.0, 2), Error);
    EXPECT_THROW(Jet(0.0, {1.0, std::nan("")}), Error);
}

TEST(Jet, DivisionAndPowers) {
    const Jet x = Jet::variable(2.0, 6);
    const Jet inv = Jet::constant(2.0, 1.0, 6) / x;  // 1/(2+h)
    for (int j = 0; j <= 6; ++j) EXPECT_NEAR(inv[j], std::pow(-1.0, j) / std::pow(2.0, j + 1), 1e-15);
    const Jet cube = pow(x, 3L);
    EXPECT_NEAR(cube[0], 8.0, 1e-15);
    EXPECT_NEAR(cube[1], 12.0, 1e-15);
    EXPECT_NEAR(cube[2], 6.0, 1e-15);
    EXPECT_NEAR(cube[3], 1.0, 1e-15);
    EXPECT_NEAR(cube[4], 0.0, 1e-15);
    const Jet half = pow(x, 0.5);
    const Jet s = sqrt(x);
    for (int j = 0; j <= 6; ++j) EXPECT_NEAR(half[j], s[j], 1e-14);
    const Jet neg = pow(x, -2L);
    EXPECT_NEAR(neg[0], 0.25, 1e-15);
    EXPECT_NEAR(neg[1], -0.25, 1e-15);
    EXPECT_THROW(log(Jet::variable(-1.0, 3)), Error);
}

// --- order of vanishing ---

TEST(OrderOfVanishing, Examples) {
    EXPECT_EQ(order_of_vanishing(parse("x^4"), 0.0, 8), 4);
    EXPECT_EQ(order_of_vanishing(parse("exp(x)"), 0.0, 8), 0);
    EXPECT_EQ(order_of_vanishing(parse("x^2*(x-1)"), 1.0, 8), 1);
    EXPECT_EQ(order_of_vanishing(parse("x - x"), 0.0, 8), std::nullopt);
    EXPECT_EQ(order_of_vanishing(parse("x^12"), 0.0, 8), std::nullopt);
    EXPECT_THROW(order_of_vanishing(parse("x"), 0.0, 0), Error);
}

TEST(OrderOfVanishing, ThresholdIsRelative) {
    EXPECT_EQ(order_of_vanishing(parse("1e-6*(x^3)"), 0.0, 8), 3);
    EXPECT_EQ(order_of_vanishing(parse("1e12*(x^3) + 1e-3*x"), 0.0, 8), 3);
}
