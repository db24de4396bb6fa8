#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mva/jet.hpp"

namespace mva {

enum class NodeKind { Constant, Variable, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, Pow };

int arity(NodeKind kind) noexcept;

/// Immutable expression tree over the single variable `x`.
struct ExprNode {
    NodeKind kind = NodeKind::Constant;
    double value = 0.0;  // Constant only
    std::shared_ptr<const ExprNode> lhs;
    std::shared_ptr<const ExprNode> rhs;
};

bool structurally_equal(const ExprNode& a, const ExprNode& b);

namespace detail {
struct Program;
}

inline constexpr int kDefaultMaxJetOrder = 32;

/// A parsed or constructed function f(x). Holds the tree and a compiled
/// evaluation tape; copies share both. All members are const and reentrant.
class Expr {
public:
    static Expr constant(double value);
    static Expr variable();
    static Expr unary(NodeKind kind, const Expr& child);
    static Expr binary(NodeKind kind, const Expr& lhs, const Expr& rhs);

    explicit Expr(std::shared_ptr<const ExprNode> root);

    const ExprNode& root() const noexcept { return *root_; }
    std::shared_ptr<const ExprNode> root_ptr() const noexcept { return root_; }
    std::size_t node_count() const noexcept;

    friend Expr operator+(const Expr& a, const Expr& b) { return binary(NodeKind::Add, a, b); }
    friend Expr operator-(const Expr& a, const Expr& b) { return binary(NodeKind::Sub, a, b); }
    friend Expr operator*(const Expr& a, const Expr& b) { return binary(NodeKind::Mul, a, b); }
    friend Expr operator/(const Expr& a, const Expr& b) { return binary(NodeKind::Div, a, b); }
    Expr operator-() const { return unary(NodeKind::Neg, *this); }

    friend bool operator==(const Expr& a, const Expr& b) { return structurally_equal(*a.root_, *b.root_); }

private:
    friend double eval(const Expr&, double);
    friend Jet jet_eval(const Expr&, double, int, int);
    friend void derivatives_into(const Expr&, double, std::span<double>);

    std::shared_ptr<const ExprNode> root_;
    std::shared_ptr<const detail::Program> program_;
};

Expr pow(const Expr& base, const Expr& exponent);

/// Grammar:
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-"? power
///   power  := atom ("^" "-"? power)?          (right-associative)
///   atom   := number | "x" | func "(" expr ")" | "(" expr ")"
///   func   := sin | cos | exp | log | sqrt
/// Throws ParseError with the byte offset of the offending token.
Expr parse(std::string_view text);

/// Text that parses back to a structurally equal tree.
std::string print(const Expr& f);
std::string print(const ExprNode& node);

/// f(x) in plain double arithmetic. Throws Error{Domain} naming the
/// offending subexpression.
double eval(const Expr& f, double x);

/// Taylor coefficients t_j = f^(j)(x0)/j!, j = 0..order, by jet arithmetic.
/// Throws Error{OrderOverflow} if order > max_order.
Jet jet_eval(const Expr& f, double x0, int order, int max_order = kDefaultMaxJetOrder);

/// Allocation-light variant: writes coefficients 0..out.size()-1 into `out`.
void derivatives_into(const Expr& f, double x0, std::span<double> out);

/// Smallest j >= start with |t_j| > tol * max(1, max_{i<=kmax} |t_i|), or
/// nullopt when every coefficient up to kmax is below threshold.
std::optional<int> order_of_vanishing(const Jet& jet, double tol = 1e-9, int start = 0);
std::optional<int> order_of_vanishing(const Expr& f, double x0, int kmax, double tol = 1e-9);

}  // namespace mva
