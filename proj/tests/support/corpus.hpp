#pragma once

#include <string>
#include <vector>

namespace corpus {

struct Entry {
    std::string name;
    std::string function;
    double a0;
    double b0;
    double domain_hi;
};

// Hand-built polynomials with a0 = 0, b0 = 3 and a degenerate abscissa at c0 = 1.
inline const std::string kTwoBranches = "3*x^5 - 24*x^4 + 70*x^3 - 96*x^2 + 63*x";
inline const std::string kIsolated = "5*x^6 - 54*x^5 + 222*x^4 - 440*x^3 + 453*x^2 - 234*x";
inline const std::string kInflection = "3*x^4 - 17*x^3 + 33*x^2 - 27*x";
inline const std::string kOneSided = "2*x^6 - 21*x^5 + 84*x^4 - 162*x^3 + 162*x^2 - 81*x";

inline const std::string kParabola = "-x^2 + 2*x";
inline const std::string kCubic = "x^3 - 3*x^2 + 2*x";
inline const std::string kQuartic = "x^4";

inline std::vector<Entry> problems() {
    return {
        {"parabola", kParabola, 0.0, 2.0, 4.0},
        {"cubic", kCubic, 0.0, 3.0, 3.5},
        {"quartic", kQuartic, -1.0, 1.0, 1.5},
        {"two_branches", kTwoBranches, 0.0, 3.0, 3.5},
        {"isolated", kIsolated, 0.0, 3.0, 3.5},
        {"inflection", kInflection, 0.0, 3.0, 3.5},
        {"one_sided", kOneSided, 0.0, 3.0, 3.5},
        {"sine", "sin(x)", 0.0, 3.0, 6.0},
        {"exp_mix", "exp(x/2) - x^3/10", 0.0, 2.0, 3.0},
        {"log_sqrt", "log(1 + x) * sqrt(x + 1)", 0.0, 2.5, 3.0},
    };
}

struct DegeneratePoint {
    std::string name;
    std::string function;
    double a0;
    double b0;
    double c0;
};

inline std::vector<DegeneratePoint> degenerate_points() {
    return {
        {"quartic", kQuartic, -1.0, 1.0, 0.0},
        {"two_branches", kTwoBranches, 0.0, 3.0, 1.0},
        {"isolated", kIsolated, 0.0, 3.0, 1.0},
        {"inflection", kInflection, 0.0, 3.0, 1.0},
        {"one_sided", kOneSided, 0.0, 3.0, 1.0},
    };
}

}  // namespace corpus
