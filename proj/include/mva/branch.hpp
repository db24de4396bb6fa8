#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "mva/local_case.hpp"
#include "mva/mvt.hpp"
#include "mva/solver.hpp"

namespace mva {

enum class StopReason { RangeExhausted, DegenerateFc, DomainEdge, CorrectorFailure };

std::string_view to_string(StopReason r);

/// Which variable parameterizes the branch: c = C(b) or b = B(c).
enum class BranchParameter { CofB, BofC };

std::string_view to_string(BranchParameter p);

/// A traced solution curve. Points are strictly increasing in the parameter
/// (b for CofB, c for BofC); `stop_low`/`stop_high` say why each end stopped.
struct Branch {
    BranchParameter parameter = BranchParameter::CofB;
    std::vector<SolutionPoint> points;
    std::size_t seed_index = 0;
    StopReason stop_low = StopReason::RangeExhausted;
    StopReason stop_high = StopReason::RangeExhausted;
    LocalCase seed_case = LocalCase::RegularC;
};

struct TraceConfig {
    double step = 0.0;          // parameter step; 0 picks 0.01*(b0 - a0)
    double tol = 1e-10;         // bound on |F| at every stored point
    double degeneracy = 1e-7;   // stop when |F_c| (|F_b| for B-branches) < degeneracy*scale
    int kmax = 16;
    SolverConfig solver{};      // rho and fixed-point tolerance for the corrector
};

}  // namespace mva
