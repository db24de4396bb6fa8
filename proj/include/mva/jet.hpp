#pragma once

#include <span>
#include <vector>

namespace mva {

/// Truncated Taylor expansion at `point()`: coefficient j is f^(j)(x0)/j!.
///
/// Binary operations truncate to the smaller order and require both operands
/// to share an expansion point. Domain violations (log of a nonpositive
/// value, division by zero, ...) throw Error{Domain}.
class Jet {
public:
    Jet(double x0, std::vector<double> coeffs);

    static Jet constant(double x0, double value, int order);
    static Jet variable(double x0, int order);

    double point() const noexcept { return x0_; }
    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double operator[](int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }

    /// f^(j)(x0), i.e. coefficient j times j!.
    double derivative(int j) const;

    Jet truncated(int order) const;

    /// Value of the truncated polynomial at x0 + h.
    double evaluate_offset(double h) const;

    Jet operator-() const;
    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend bool operator==(const Jet&, const Jet&) = default;

private:
    double x0_;
    std::vector<double> coeffs_;
};

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, long exponent);
Jet pow(const Jet& a, double exponent);

/// Coefficient kernels on raw spans of equal length n+1. `out` must not alias
/// the inputs. These are what the compiled expression evaluator runs.
namespace series {

void add(std::span<const double> a, std::span<const double> b, std::span<double> out);
void sub(std::span<const double> a, std::span<const double> b, std::span<double> out);
void neg(std::span<const double> a, std::span<double> out);
void mul(std::span<const double> a, std::span<const double> b, std::span<double> out);
// Division requires b[0] != 0; the caller checks the domain.
void div(std::span<const double> a, std::span<const double> b, std::span<double> out);
void exp(std::span<const double> a, std::span<double> out);
// Requires a[0] > 0.
void log(std::span<const double> a, std::span<double> out);
// Fills both outputs at once; the recurrences are coupled.
void sin_cos(std::span<const double> a, std::span<double> s, std::span<double> c);
// Requires a[0] > 0 when the order is positive.
void sqrt(std::span<const double> a, std::span<double> out);
// Repeated squaring; `scratch` must hold 2*(n+1) doubles.
void pow_int(std::span<const double> a, long exponent, std::span<double> out, std::span<double> scratch);

}  // namespace series

}  // namespace mva
