#include "reluplex/numerics.hpp"

#include <cmath>
#include <set>
#include <vector>

namespace reluplex {

RoundoffReport measure_roundoff(const SimplexState& state) {
    RoundoffReport rep;
    rep.at_pivot = state.pivot_count();
    const std::vector<double>& alpha = state.assignment_vector();
    for (const auto& [basic, row] : state.initial_tableau().rows()) {
        double sum = 0.0;
        for (const auto& [var, coeff] : row)
            sum += coeff * alpha[var];
        rep.error += std::abs(alpha[basic] - sum);
    }
    return rep;
}

void restore_tableau(SimplexState& state) {
    Tableau fresh = state.initial_tableau();
    const double drop_tol = state.options().drop_tolerance;

    // Variables to bring into the basis, and initial-basis rows free to leave
    // (their basic variable is non-basic in the target).
    std::set<VarId> entering, leaving;
    for (const auto& [basic, row] : state.tableau().rows()) {
        (void)row;
        if (!fresh.is_basic(basic))
            entering.insert(basic);
    }
    for (const auto& [basic, row] : fresh.rows()) {
        (void)row;
        if (!state.tableau().is_basic(basic))
            leaving.insert(basic);
    }

    while (!entering.empty()) {
        VarId best_leave = kNoVar, best_enter = kNoVar;
        double best = 0.0;
        for (VarId l : leaving) {
            const Tableau::Row& row = fresh.row(l);
            for (VarId e : entering) {
                const double m = std::abs(coefficient_of(row, e));
                if (m > best) {
                    best = m;
                    best_leave = l;
                    best_enter = e;
                }
            }
        }
        if (best_enter == kNoVar)
            throw TableauRestorationError(
                "tableau restoration: no pivot order reaches the current basis");
        fresh.pivot(best_leave, best_enter, drop_tol);
        leaving.erase(best_leave);
        entering.erase(best_enter);
    }

    state.install_restored_tableau(std::move(fresh));
}

RoundoffMonitor::CheckResult RoundoffMonitor::check_and_maybe_restore(
    SimplexState& state) {
    if (state.pivot_count() < last_checked_pivot_ + options_.cadence)
        return CheckResult::NotDue;
    last_checked_pivot_ = state.pivot_count();
    last_report_ = measure_roundoff(state);
    if (last_report_.error <= options_.threshold)
        return CheckResult::Checked;
    restore_tableau(state);
    ++restorations_;
    return CheckResult::Restored;
}

}  // namespace reluplex
