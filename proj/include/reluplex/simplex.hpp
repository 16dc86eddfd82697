#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "reluplex/linear.hpp"
#include "reluplex/tableau.hpp"

namespace reluplex {

enum class BoundKind { Lower, Upper };

// A derived or asserted bound crossing: lower(var) > upper(var). Depths are
// the split-stack depths at which the two sides were introduced; their max is
// the deepest decision the contradiction actually depends on.
struct Conflict {
    VarId var = kNoVar;
    double lower = 0.0;
    double upper = 0.0;
    unsigned lower_depth = 0;
    unsigned upper_depth = 0;

    unsigned cause_depth() const {
        return lower_depth > upper_depth ? lower_depth : upper_depth;
    }
};

// One entry of the bound journal. Unwinding entries in reverse restores the
// exact previous bounds and their introduction depths bit-for-bit.
struct BoundEvent {
    VarId var;
    BoundKind kind;
    double old_value;
    double new_value;
    unsigned old_depth;
    unsigned new_depth;
};

// Simplex state over bounded variables: current tableau, the retained initial
// tableau (never pivoted, only extended by structural rows), bounds with
// their introduction depths, and a total assignment. The solution-set
// invariant: every tableau row evaluates to its basic variable's value under
// the assignment, and the current tableau's solution set equals the initial
// tableau's.
class SimplexState {
public:
    struct Options {
        double drop_tolerance = 1e-12;     // sparse coefficient cutoff
        double min_pivot_element = 1e-6;   // degenerate-pivot rejection
        std::uint64_t bland_after = 10000; // heuristic -> Bland switch
    };

    // Builds the initial configuration: one fresh auxiliary basic variable
    // per atom, carrying the atom's relation as its bounds. All assignments
    // start at zero; problem variables start unbounded.
    static SimplexState init_configuration(unsigned num_vars,
                                           const std::vector<LinearAtom>& atoms,
                                           Options options);
    static SimplexState init_configuration(unsigned num_vars,
                                           const std::vector<LinearAtom>& atoms);

    unsigned num_vars() const { return static_cast<unsigned>(lower_.size()); }
    const Options& options() const { return options_; }
    void set_options(const Options& options) { options_ = options; }

    // Appends a new basic row (and its auxiliary variable) to both the
    // current and the initial tableau. Must only be used before search starts
    // pivoting; the assignment of the new variable is set from the form so
    // the row invariant holds immediately.
    VarId add_structural_row(const SparseVector& form, double lo, double hi);

    double lower(VarId v) const { return lower_[v]; }
    double upper(VarId v) const { return upper_[v]; }
    unsigned lower_depth(VarId v) const { return lower_depth_[v]; }
    unsigned upper_depth(VarId v) const { return upper_depth_[v]; }

    // Applies a strictly improving bound; weaker or equal values are ignored.
    // Returns the crossing if the new bound contradicts the opposite one (the
    // bound is still recorded so the journal can restore it on backtrack).
    std::optional<Conflict> set_lower(VarId v, double value);
    std::optional<Conflict> set_upper(VarId v, double value);

    double assignment(VarId v) const { return assignment_[v]; }
    const std::vector<double>& assignment_vector() const { return assignment_; }
    // Diagnostic hook: injects drift so roundoff machinery can be exercised.
    void nudge_assignment(VarId v, double delta) { assignment_[v] += delta; }

    const Tableau& tableau() const { return tableau_; }
    const Tableau& initial_tableau() const { return initial_; }

    bool is_basic(VarId v) const { return tableau_.is_basic(v); }
    bool within_bounds(VarId v) const {
        return assignment_[v] >= lower_[v] && assignment_[v] <= upper_[v];
    }

    enum class PivotStatus { Ok, NotBasic, AlreadyBasic, ZeroPivot, Degenerate };

    // Pivot leaving<->entering. Rejects pivot elements below
    // min_pivot_element unless allow_degenerate (Bland mode needs any nonzero
    // element to keep its termination guarantee). Assignment is unchanged.
    PivotStatus pivot(VarId leaving, VarId entering, bool allow_degenerate = false);

    // Sets alpha(var) += delta for a non-basic var and propagates through the
    // column so every row stays satisfied.
    void update(VarId var, double delta);

    struct SlackSets {
        std::vector<VarId> increase;  // non-basics able to raise the basic var
        std::vector<VarId> decrease;  // non-basics able to lower it
    };
    SlackSets slack_sets(VarId basic) const;

    struct RepairResult {
        enum class Kind { AllWithinBounds, Infeasible, Aborted };
        Kind kind = Kind::AllWithinBounds;
        VarId infeasible_basic = kNoVar;  // violated row with an empty slack set
        std::uint64_t iterations = 0;
        std::uint64_t pivots = 0;
    };

    struct RepairHooks {
        // After each accepted pivot+update; return false to abort the repair.
        std::function<bool(VarId entering)> after_pivot;
        // Polled each iteration; return false to abort (budget exhaustion).
        std::function<bool()> keep_going;
        // Heuristic-mode taste: true if moving var to new_value would break a
        // relation the caller is maintaining. Entering candidates that keep
        // relations intact win over same-sized ones that break them. Ignored
        // in Bland mode.
        std::function<bool(VarId var, double new_value)> would_break;
    };

    // Drives out-of-bounds variables back into their ranges: non-basics move
    // straight onto the violated bound, basics pivot against a slack-set
    // candidate. Steepest violation + largest pivot element first; switches
    // to Bland's rule (lowest indices) after options().bland_after iterations
    // within this call, which guarantees termination.
    RepairResult repair_out_of_bounds(const RepairHooks* hooks = nullptr);

    unsigned depth() const { return depth_; }
    void set_depth(unsigned d) { depth_ = d; }

    const std::vector<BoundEvent>& bound_log() const { return bound_log_; }
    std::size_t bound_log_size() const { return bound_log_.size(); }
    // Reverts every bound event past mark, newest first.
    void unwind_bound_log(std::size_t mark);

    std::uint64_t pivot_count() const { return pivot_count_; }

    // Swaps in a tableau rebuilt from the initial one (same basis) and
    // recomputes the basic assignments from the fresh rows.
    void install_restored_tableau(Tableau fresh);

    double max_row_residual() const;

private:
    SimplexState() = default;

    std::optional<Conflict> record_bound(VarId v, BoundKind kind, double value);

    Tableau tableau_;
    Tableau initial_;
    std::vector<double> lower_, upper_, assignment_;
    std::vector<unsigned> lower_depth_, upper_depth_;
    std::vector<BoundEvent> bound_log_;
    unsigned depth_ = 0;
    std::uint64_t pivot_count_ = 0;
    Options options_;
};

}  // namespace reluplex
