#pragma once

#include <cstdint>
#include <stdexcept>

#include "reluplex/simplex.hpp"

namespace reluplex {

struct RoundoffReport {
    double error = 0.0;
    std::uint64_t at_pivot = 0;
};

// Cumulative drift: sum over the initial basics of |alpha(b) - row_0(alpha)|.
// Zero immediately after initialization; grows with accumulated float error
// in pivots and updates.
RoundoffReport measure_roundoff(const SimplexState& state);

struct TableauRestorationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rebuilds the current tableau from the retained initial one with a short
// pivot sequence reaching the same basis (greedy largest pivot element over
// all remaining choices), then recomputes basic assignments from the fresh
// rows. Bounds, non-basic assignments and the basis are untouched. Throws
// TableauRestorationError if no pivot order reaches the basis.
void restore_tableau(SimplexState& state);

// Cadence-driven roundoff watchdog. check_and_maybe_restore is cheap to call
// after every pivot: it measures only once per `cadence` pivots and restores
// only above `threshold`.
class RoundoffMonitor {
public:
    struct Options {
        double threshold = 1e-6;
        std::uint64_t cadence = 5000;
    };

    RoundoffMonitor() = default;
    explicit RoundoffMonitor(Options options) : options_(options) {}

    enum class CheckResult { NotDue, Checked, Restored };

    CheckResult check_and_maybe_restore(SimplexState& state);

    const Options& options() const { return options_; }
    std::uint64_t restorations() const { return restorations_; }
    const RoundoffReport& last_report() const { return last_report_; }

private:
    Options options_;
    std::uint64_t last_checked_pivot_ = 0;
    std::uint64_t restorations_ = 0;
    RoundoffReport last_report_;
};

}  // namespace reluplex
