#pragma once

#include <optional>
#include <vector>

#include "reluplex/relu.hpp"
#include "reluplex/simplex.hpp"

namespace reluplex {

struct DerivedBound {
    VarId var;
    BoundKind kind;
    double value;
    VarId source_row;  // basic variable of the row that produced it
    unsigned depth;
};

// Interval reasoning over tableau rows. A row basic = sum(c_j x_j) yields
// lower(basic) from each term's worst case toward the bottom and upper(basic)
// toward the top; a candidate is installed only when every contributing bound
// is finite and the candidate beats the current bound by more than `margin`.
class BoundTightener {
public:
    struct Options {
        double margin = 1e-12;      // "strictly tighter" cutoff
        unsigned max_sweeps = 3;    // full-tableau fixpoint cap
    };

    enum class Scope { EnteringOnly, FullTableau };

    struct PassResult {
        std::optional<Conflict> conflict;
        unsigned derived = 0;
        unsigned eliminated = 0;
    };

    BoundTightener() = default;
    explicit BoundTightener(Options options) : options_(options) {}

    const Options& options() const { return options_; }

    PassResult tighten_row(SimplexState& state, VarId basic);

    // Fixes the phase of every pair whose bounds already decide it:
    // lower(backward) > 0 or lower(forward) > 0 forces Active,
    // upper(backward) < 0 forces Inactive. Contradictory evidence surfaces
    // as a bound crossing from the attempted fix.
    std::optional<Conflict> eliminate_relu_phases(SimplexState& state,
                                                  ReluSystem& relus);

    // EnteringOnly tightens the row the latest pivot created; FullTableau
    // sweeps every row to a fixpoint (capped at max_sweeps). Both finish with
    // a phase-elimination scan.
    PassResult tighten_pass(SimplexState& state, ReluSystem& relus, Scope scope,
                            VarId entering = kNoVar);

    const std::vector<DerivedBound>& log() const { return log_; }
    std::size_t log_size() const { return log_.size(); }
    void truncate_log(std::size_t mark) { log_.resize(mark); }

private:
    Options options_;
    std::vector<DerivedBound> log_;
};

// Shrinks every undecided backward variable's range by eps on each finite
// side, snapping nearly-decided pairs to a phase: a backward lower bound in
// [-eps, 0) becomes Active at 0, a forward upper bound in (0, eps] becomes
// Inactive at 0. Sound for SAT answers only; UNSAT under the shrunken bounds
// is inconclusive and must be reported as such.
std::optional<Conflict> under_approximate(SimplexState& state, ReluSystem& relus,
                                          double eps);

}  // namespace reluplex
