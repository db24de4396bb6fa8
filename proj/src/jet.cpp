#include "mva/jet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mva/error.hpp"

namespace mva {

namespace series {

void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] + b[k];
}

void sub(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] - b[k];
}

void neg(std::span<const double> a, std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = -a[k];
}

void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j <= k; ++j) sum += a[j] * b[k - j];
        out[k] = sum;
    }
}

void div(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) {
        double sum = a[k];
        for (std::size_t j = 1; j <= k; ++j) sum -= b[j] * out[k - j];
        out[k] = sum / b[0];
    }
}

void exp(std::span<const double> a, std::span<double> out) {
    out[0] = std::exp(a[0]);
    for (std::size_t k = 1; k < out.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 1; j <= k; ++j) sum += static_cast<double>(j) * a[j] * out[k - j];
        out[k] = sum / static_cast<double>(k);
    }
}

void log(std::span<const double> a, std::span<double> out) {
    out[0] = std::log(a[0]);
    for (std::size_t k = 1; k < out.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 1; j < k; ++j) sum += static_cast<double>(j) * out[j] * a[k - j];
        out[k] = (a[k] - sum / static_cast<double>(k)) / a[0];
    }
}

void sin_cos(std::span<const double> a, std::span<double> s, std::span<double> c) {
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (std::size_t k = 1; k < s.size(); ++k) {
        double ss = 0.0;
        double cs = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double w = static_cast<double>(j) * a[j];
            ss += w * c[k - j];
            cs += w * s[k - j];
        }
        s[k] = ss / static_cast<double>(k);
        c[k] = -cs / static_cast<double>(k);
    }
}

void sqrt(std::span<const double> a, std::span<double> out) {
    out[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k < out.size(); ++k) {
        double sum = a[k];
        for (std::size_t j = 1; j < k; ++j) sum -= out[j] * out[k - j];
        out[k] = sum / (2.0 * out[0]);
    }
}

namespace {

void reciprocal(std::span<const double> b, std::span<double> out) {
    out[0] = 1.0 / b[0];
    for (std::size_t k = 1; k < out.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 1; j <= k; ++j) sum += b[j] * out[k - j];
        out[k] = -sum / b[0];
    }
}

}  // namespace

void pow_int(std::span<const double> a, long exponent, std::span<double> out, std::span<double> scratch) {
    const std::size_t n = out.size();
    auto base = scratch.subspan(0, n);
    auto tmp = scratch.subspan(n, n);
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), base.begin());
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
    unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
    while (e != 0) {
        if (e & 1UL) {
            mul(out, base, tmp);
            std::copy(tmp.begin(), tmp.end(), out.begin());
        }
        e >>= 1;
        if (e != 0) {
            mul(base, base, tmp);
            std::copy(tmp.begin(), tmp.end(), base.begin());
        }
    }
    if (exponent < 0) {
        reciprocal(out, tmp);
        std::copy(tmp.begin(), tmp.end(), out.begin());
    }
}

}  // namespace series

namespace {

void require_finite(const std::vector<double>& coeffs) {
    for (double c : coeffs) {
        if (!std::isfinite(c)) throw Error(ErrorKind::Domain, "jet coefficient is not finite");
    }
}

void require_same_point(const Jet& a, const Jet& b) {
    if (a.point() != b.point()) {
        throw Error(ErrorKind::InvalidArgument, "jets expanded at different points");
    }
}

std::size_t common_size(const Jet& a, const Jet& b) {
    require_same_point(a, b);
    return static_cast<std::size_t>(std::min(a.order(), b.order()) + 1);
}

template <typename Kernel>
Jet binary(const Jet& a, const Jet& b, Kernel kernel) {
    const std::size_t n = common_size(a, b);
    std::vector<double> out(n);
    kernel(a.coeffs().first(n), b.coeffs().first(n), std::span<double>(out));
    return Jet(a.point(), std::move(out));
}

template <typename Kernel>
Jet unary(const Jet& a, Kernel kernel) {
    std::vector<double> out(a.coeffs().size());
    kernel(a.coeffs(), std::span<double>(out));
    return Jet(a.point(), std::move(out));
}

}  // namespace

Jet::Jet(double x0, std::vector<double> coeffs) : x0_(x0), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "jet needs at least one coefficient");
    if (!std::isfinite(x0_)) throw Error(ErrorKind::InvalidArgument, "jet expansion point is not finite");
    require_finite(coeffs_);
}

Jet Jet::constant(double x0, double value, int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = value;
    return Jet(x0, std::move(c));
}

Jet Jet::variable(double x0, int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = x0;
    if (order >= 1) c[1] = 1.0;
    return Jet(x0, std::move(c));
}

double Jet::derivative(int j) const {
    double factorial = 1.0;
    for (int i = 2; i <= j; ++i) factorial *= i;
    return (*this)[j] * factorial;
}

Jet Jet::truncated(int order) const {
    if (order < 0 || order > this->order()) {
        throw Error(ErrorKind::InvalidArgument, "cannot truncate jet of order " + std::to_string(this->order()) +
                                                    " to " + std::to_string(order));
    }
    return Jet(x0_, std::vector<double>(coeffs_.begin(), coeffs_.begin() + order + 1));
}

double Jet::evaluate_offset(double h) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * h + *it;
    return acc;
}

Jet Jet::operator-() const { return unary(*this, series::neg); }

Jet operator+(const Jet& a, const Jet& b) { return binary(a, b, series::add); }
Jet operator-(const Jet& a, const Jet& b) { return binary(a, b, series::sub); }
Jet operator*(const Jet& a, const Jet& b) { return binary(a, b, series::mul); }

Jet operator/(const Jet& a, const Jet& b) {
    if (b[0] == 0.0) throw Error(ErrorKind::Domain, "division by a jet with zero constant term");
    return binary(a, b, series::div);
}

Jet sin(const Jet& a) {
    std::vector<double> s(a.coeffs().size()), c(a.coeffs().size());
    series::sin_cos(a.coeffs(), s, c);
    return Jet(a.point(), std::move(s));
}

Jet cos(const Jet& a) {
    std::vector<double> s(a.coeffs().size()), c(a.coeffs().size());
    series::sin_cos(a.coeffs(), s, c);
    return Jet(a.point(), std::move(c));
}

Jet exp(const Jet& a) { return unary(a, series::exp); }

Jet log(const Jet& a) {
    if (!(a[0] > 0.0)) throw Error(ErrorKind::Domain, "log of nonpositive value");
    return unary(a, series::log);
}

Jet sqrt(const Jet& a) {
    if (a[0] < 0.0 || (a[0] == 0.0 && a.order() > 0)) {
        throw Error(ErrorKind::Domain, "sqrt outside its differentiable domain");
    }
    return unary(a, series::sqrt);
}

Jet pow(const Jet& a, long exponent) {
    if (exponent < 0 && a[0] == 0.0) throw Error(ErrorKind::Domain, "negative power of zero");
    const std::size_t n = a.coeffs().size();
    std::vector<double> out(n), scratch(2 * n);
    series::pow_int(a.coeffs(), exponent, out, scratch);
    return Jet(a.point(), std::move(out));
}

Jet pow(const Jet& a, double exponent) {
    if (!(a[0] > 0.0)) throw Error(ErrorKind::Domain, "non-integer power needs a positive base");
    Jet scaled = log(a);
    return exp(Jet::constant(a.point(), exponent, a.order()) * scaled);
}

}  // namespace mva
