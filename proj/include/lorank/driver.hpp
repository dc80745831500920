#pragma once

#include <string>
#include <vector>

#include "lorank/config.hpp"

namespace lorank {

/// Maxcut structure: m = n, each A_i a single unit diagonal entry on distinct rows, b = 1.
ProblemClass detect_class(const SdpProblemd& problem);

/// h: 10 for maxcut and for names marking min-bisection, graph partition or
/// QAP instances; 5 for matrix completion with n < 10000, 2.5 above; else 1.
double default_heuristic_factor(ProblemClass cls, const SdpProblemd& problem);

/// Phase handoff: U = V = R, lambda = lambda_bm / 2, rho = h * rho_bm, gamma per rule.
/// `gamma_param` is the fixed gamma or, for GammaRule::slack_norm, the scale.
SplitState<double> switch_to_split(const SdpProblemd& problem, const BmState<double>& bm,
                                   double heuristic_factor, GammaRule rule, double gamma_param);

/// Warm start, phase switch, splitting ADMM, recombination and metrics.
SolveReport solve(const SdpProblemd& problem, const SolverConfig& config = {});

/// Equality of everything except wall-clock fields.
bool same_outcome(const SolveReport& a, const SolveReport& b);

}  // namespace lorank
