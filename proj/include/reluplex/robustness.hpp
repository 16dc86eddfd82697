#pragma once

#include <vector>

#include "reluplex/encoder.hpp"

namespace reluplex {

// Winning class of a score vector: lowest score by default, highest with
// argmax. Ties go to the smaller index.
unsigned classify(const std::vector<double>& scores, bool argmax = false);

struct RobustnessOptions {
    bool argmax = false;
    // Challenger must beat the label by this much. Must dominate the solver's
    // ReLU tolerance, or pure slack can fake a win on the boundary;
    // certificates hold up to the margin.
    double margin = 1e-6;
    SolveQueryOptions solve;
};

struct RobustnessResult {
    bool robust = false;
    bool inconclusive = false;  // timeout, or unsat under an under-approximation
    unsigned label = 0;
    unsigned adversarial_label = 0;  // valid when !robust
    DecodedWitness counterexample;   // valid when !robust
    SolveStats totals;
};

// Does every input within the L-inf ball of radius delta around x0 classify
// like x0 does?
RobustnessResult check_local(const Network& net, const std::vector<double>& x0,
                             double delta, const RobustnessOptions& opts = RobustnessOptions());

struct RadiusSearch {
    double robust_delta = 0.0;   // certified radius
    double fragile_delta = 0.0;  // smallest radius with a known adversarial (0 = none)
    unsigned queries = 0;
    bool inconclusive = false;
    RobustnessResult last_failure;
};

// Bisection for the classification boundary distance: the largest delta in
// [0, max_delta] with check_local holding, bracketed to `tolerance`. Degenerate
// endpoints short-circuit (robust at max_delta, or fragile immediately).
RadiusSearch search_local_radius(const Network& net, const std::vector<double>& x0,
                                 double max_delta, double tolerance,
                                 const RobustnessOptions& opts = RobustnessOptions());

// Two disjoint copies of the network side by side, for properties that relate
// a pair of executions.
Network doubled_network(const Network& net);

struct GlobalRobustnessResult {
    bool robust = false;
    bool inconclusive = false;
    unsigned output = 0;          // which output moved too much, when !robust
    DecodedWitness pair_witness;  // inputs hold x1 ++ x2, outputs y1 ++ y2
    SolveStats totals;
};

// For all x1, x2 in the domain box with |x1 - x2|_inf <= delta, every output
// moves by less than epsilon (up to the margin).
GlobalRobustnessResult check_global(const Network& net,
                                    const std::vector<double>& domain_lower,
                                    const std::vector<double>& domain_upper, double delta,
                                    double epsilon,
                                    const RobustnessOptions& opts = RobustnessOptions());

}  // namespace reluplex
