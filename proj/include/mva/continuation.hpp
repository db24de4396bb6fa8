#pragma once

#include <utility>
#include <vector>

#include "mva/branch.hpp"
#include "mva/classify.hpp"

namespace mva {

/// Traces c = C(b) through the solution (b0, c0) across `b_range`.
///
/// RegularC seeds use an Euler predictor with slope -F_b/F_c and a
/// contraction corrector re-centred at the predicted point; UniqueOdd seeds,
/// where F_c vanishes at the seed, use a secant predictor and a bisection
/// corrector. Other seeds throw Error{SeedNotRegular}. A failed corrector
/// step is retried once at half the step; a second failure ends that side
/// of the branch with StopReason::CorrectorFailure.
Branch trace_c_of_b(const Problem& p, double b0, double c0, Interval b_range, const TraceConfig& config = {});

/// Traces b = B(c) through (b0, c0) across `c_range`; needs f'(b0) != f'(c0).
Branch trace_b_of_c(const Problem& p, double b0, double c0, Interval c_range, const TraceConfig& config = {});

/// Starting points on the branches that leave a TwoBranches / OneSided /
/// RegularBOnly point: steps |db| = step0 to the allowed side and brackets a
/// root of F(b, .) above and below c0 inside the search box. Returns two
/// (b, c) pairs ordered by c. Throws Error{SeedSearchFailed} when a bracket
/// is missing and Error{InvalidArgument} for any other case.
std::vector<SolutionPoint> branch_seeds_after_degeneracy(const Problem& p, double b0, double c0,
                                                         const DegeneracyReport& report, double step0 = 0.01,
                                                         double tol = 1e-10);

}  // namespace mva
