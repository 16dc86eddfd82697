#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "reluplex/numerics.hpp"
#include "reluplex/relu.hpp"
#include "reluplex/simplex.hpp"
#include "reluplex/split_stack.hpp"
#include "reluplex/tightening.hpp"

namespace reluplex {

enum class Verdict { Sat, Unsat, Timeout };

struct SolveStats {
    std::uint64_t pivots = 0;
    std::uint64_t relu_repairs = 0;
    std::uint64_t total_splits = 0;   // cases entered: pushes + flips
    std::uint64_t conflicts = 0;
    std::uint64_t tableau_restorations = 0;
    std::uint64_t derived_bounds = 0;
    unsigned max_stack_depth = 0;
    double wall_seconds = 0.0;
};

struct SolveResult {
    Verdict verdict = Verdict::Timeout;
    std::vector<double> witness;  // full assignment when Sat
    SolveStats stats;
    // Answers under an epsilon-shrunken problem prove SAT only; UNSAT must be
    // surfaced as inconclusive.
    bool under_approximate = false;
    // Floating-point replay of the witness against the initial rows, bounds
    // and ReLU semantics stayed within witness_tolerance.
    bool witness_verified = false;
};

struct EngineOptions {
    unsigned split_threshold = 5;        // repairs per pair before splitting
    unsigned tighten_cadence = 5000;     // pivots between full tighten passes
    double relu_tolerance = 1e-9;
    double witness_tolerance = 1e-6;
    double under_approx_epsilon = 0.0;   // 0 disables
    bool initial_tighten = true;
    // Evaluation switch: treat every conflict as caused at the current depth
    // (plain chronological backtracking) instead of jumping to the cause.
    bool chronological_backtracking = false;
    double timeout_seconds = 0.0;        // 0 = unlimited
    std::uint64_t max_pivots = 0;        // 0 = unlimited
    // External stop request, polled with the budget; surfaces as Timeout.
    const std::atomic<bool>* cancel = nullptr;
    std::ostream* trace = nullptr;       // JSON-lines split trace
    SimplexState::Options simplex;
    BoundTightener::Options tighten;
    RoundoffMonitor::Options roundoff;
};

// Lazy ReLU-splitting search: bounds repair via simplex, value repair of
// violated ReLU pairs, case splits once a pair has been repaired to its
// threshold, interval tightening and phase elimination along the way, and
// conflict-driven backjumping over the split stack.
class Engine {
public:
    Engine(SimplexState state, std::vector<ReluPair> pairs,
           EngineOptions options = EngineOptions());

    SolveResult solve();

    enum class RepairAction {
        UpdatedBackward,   // alpha(backward) := alpha(forward)
        UpdatedForward,    // alpha(forward) := max(0, alpha(backward))
        PivotedThenUpdated,  // forward left the basis first
        NeedsSplit
    };

    // Violated undecided pairs (|alpha(f) - max(0, alpha(b))| beyond
    // relu_tolerance), ascending. Phase-fixed pairs are linear constraints
    // already enforced through bounds and the linkage row.
    std::vector<std::size_t> relu_violations() const;

    RepairAction repair_relu(std::size_t pair);

    struct SplitCases {
        std::vector<BoundAssertion> active;
        std::vector<BoundAssertion> inactive;
    };
    // Branch descriptors for an undecided pair straddling zero.
    SplitCases split_relu(std::size_t pair) const;

    const SimplexState& state() const { return state_; }
    SimplexState& state_mut() { return state_; }
    const ReluSystem& relus() const { return relus_; }
    ReluSystem& relus_mut() { return relus_; }
    const SplitStack& stack() const { return stack_; }
    const SolveStats& stats() const { return stats_; }

    // Replays an assignment against initial rows, bounds and ReLU semantics.
    bool verify_witness(const std::vector<double>& assignment,
                        double tolerance) const;

private:
    std::optional<Conflict> prepare();
    std::size_t choose_split_pair(const std::vector<std::size_t>& viols) const;
    bool phase_forced_by_bounds(std::size_t pair, Phase* out) const;

    SimplexState state_;
    ReluSystem relus_;
    BoundTightener tightener_;
    RoundoffMonitor roundoff_;
    TraceSink trace_;
    SplitStack stack_;
    EngineOptions options_;
    SolveStats stats_;
    bool prepared_ = false;
};

}  // namespace reluplex
