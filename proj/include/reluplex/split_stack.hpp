#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "reluplex/relu.hpp"
#include "reluplex/simplex.hpp"
#include "reluplex/tightening.hpp"

namespace reluplex {

enum class SplitCase { Active, Inactive };

inline Phase to_phase(SplitCase c) {
    return c == SplitCase::Active ? Phase::Active : Phase::Inactive;
}
inline SplitCase other_case(SplitCase c) {
    return c == SplitCase::Active ? SplitCase::Inactive : SplitCase::Active;
}

// One case split. The snapshot is bounds-journal position, derived-bound log
// position, phases and repair counters; tableau and assignment are never
// rolled back (the tableau's solution set is depth-independent, and the
// assignment gets re-legalized by the next bounds repair).
struct SplitFrame {
    std::size_t pair;
    SplitCase taken;
    bool explored_other = false;
    std::size_t bound_mark;
    std::size_t derived_mark;
    std::vector<Phase> phases;
    std::vector<unsigned> repair_counts;
};

// Emits one JSON object per line; null sink disables tracing.
class TraceSink {
public:
    explicit TraceSink(std::ostream* out) : out_(out) {}
    bool enabled() const { return out_ != nullptr; }
    void push(std::size_t pair, SplitCase c, unsigned depth);
    void flip(std::size_t pair, SplitCase c, unsigned depth);
    void pop(std::size_t pair, unsigned depth, bool sibling_explored);
    void conflict(const Conflict& c, unsigned depth);

private:
    std::ostream* out_;
};

class SplitStack {
public:
    SplitStack(SimplexState& state, ReluSystem& relus, BoundTightener& tightener,
               TraceSink* trace = nullptr);

    unsigned depth() const { return static_cast<unsigned>(frames_.size()); }
    const std::vector<SplitFrame>& frames() const { return frames_; }

    std::uint64_t pushes() const { return pushes_; }
    std::uint64_t flips() const { return flips_; }
    // Every case entered, first or flipped: the split count reported outward.
    std::uint64_t total_splits() const { return pushes_ + flips_; }
    unsigned max_depth() const { return max_depth_; }

    // Opens a frame for an undecided pair and asserts first_case's bounds.
    // A returned conflict has not been handled yet.
    std::optional<Conflict> push(std::size_t pair, SplitCase first_case);

    enum class Outcome { Backjumped, RootUnsat };

    // Unwinds to the conflict's cause depth: frames strictly deeper than the
    // cause are discarded with their sibling cases unexplored, the frame at
    // the cause depth flips to its other case, exhausted frames keep
    // unwinding. Loops until some flip applies cleanly or the stack empties.
    Outcome handle_conflict(Conflict conflict);

private:
    void restore_frame_snapshot(const SplitFrame& f);

    SimplexState& state_;
    ReluSystem& relus_;
    BoundTightener& tightener_;
    TraceSink* trace_;
    std::vector<SplitFrame> frames_;
    std::uint64_t pushes_ = 0;
    std::uint64_t flips_ = 0;
    unsigned max_depth_ = 0;
};

}  // namespace reluplex
