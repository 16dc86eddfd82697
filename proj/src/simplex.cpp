#include "reluplex/simplex.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace reluplex {

SimplexState SimplexState::init_configuration(
    unsigned num_vars, const std::vector<LinearAtom>& atoms) {
    return init_configuration(num_vars, atoms, Options{});
}

SimplexState SimplexState::init_configuration(
    unsigned num_vars, const std::vector<LinearAtom>& atoms, Options options) {
    SimplexState s;
    s.options_ = options;
    const unsigned total = num_vars + static_cast<unsigned>(atoms.size());
    s.lower_.assign(total, -kInfinity);
    s.upper_.assign(total, kInfinity);
    s.assignment_.assign(total, 0.0);
    s.lower_depth_.assign(total, 0);
    s.upper_depth_.assign(total, 0);

    for (std::size_t k = 0; k < atoms.size(); ++k) {
        const LinearAtom& atom = atoms[k];
        Tableau::Row row;
        for (const auto& [var, coeff] : atom.coeffs) {
            if (var >= num_vars)
                throw std::out_of_range("atom references unknown variable " +
                                        std::to_string(var));
            if (coeff != 0.0)
                row.emplace(var, coeff);
        }
        if (row.empty())
            throw std::invalid_argument("atom " + std::to_string(k) +
                                        " has no nonzero coefficient");
        const VarId aux = num_vars + static_cast<VarId>(k);
        s.tableau_.add_row(aux, row);
        s.initial_.add_row(aux, std::move(row));
        switch (atom.relation) {
        case Relation::LessEq:
            s.upper_[aux] = atom.constant;
            break;
        case Relation::GreaterEq:
            s.lower_[aux] = atom.constant;
            break;
        case Relation::Equal:
            s.lower_[aux] = atom.constant;
            s.upper_[aux] = atom.constant;
            break;
        }
    }
    return s;
}

VarId SimplexState::add_structural_row(const SparseVector& form, double lo,
                                       double hi) {
    assert(pivot_count_ == 0 && "structural rows must precede search");
    Tableau::Row row;
    double value = 0.0;
    for (const auto& [var, coeff] : form) {
        if (var >= num_vars())
            throw std::out_of_range("structural row references unknown variable");
        if (tableau_.is_basic(var))
            throw std::logic_error("structural row must be over non-basic variables");
        if (coeff != 0.0) {
            row.emplace(var, coeff);
            value += coeff * assignment_[var];
        }
    }
    if (row.empty())
        throw std::invalid_argument("structural row has no nonzero coefficient");
    const VarId aux = static_cast<VarId>(num_vars());
    lower_.push_back(lo);
    upper_.push_back(hi);
    assignment_.push_back(value);
    lower_depth_.push_back(0);
    upper_depth_.push_back(0);
    tableau_.add_row(aux, row);
    initial_.add_row(aux, std::move(row));
    return aux;
}

std::optional<Conflict> SimplexState::record_bound(VarId v, BoundKind kind,
                                                   double value) {
    const bool improves = kind == BoundKind::Lower ? value > lower_[v]
                                                   : value < upper_[v];
    if (!improves)
        return std::nullopt;
    if (kind == BoundKind::Lower) {
        bound_log_.push_back(
            {v, kind, lower_[v], value, lower_depth_[v], depth_});
        lower_[v] = value;
        lower_depth_[v] = depth_;
    } else {
        bound_log_.push_back(
            {v, kind, upper_[v], value, upper_depth_[v], depth_});
        upper_[v] = value;
        upper_depth_[v] = depth_;
    }
    if (lower_[v] > upper_[v])
        return Conflict{v, lower_[v], upper_[v], lower_depth_[v],
                        upper_depth_[v]};
    return std::nullopt;
}

std::optional<Conflict> SimplexState::set_lower(VarId v, double value) {
    return record_bound(v, BoundKind::Lower, value);
}

std::optional<Conflict> SimplexState::set_upper(VarId v, double value) {
    return record_bound(v, BoundKind::Upper, value);
}

void SimplexState::unwind_bound_log(std::size_t mark) {
    while (bound_log_.size() > mark) {
        const BoundEvent& e = bound_log_.back();
        if (e.kind == BoundKind::Lower) {
            lower_[e.var] = e.old_value;
            lower_depth_[e.var] = e.old_depth;
        } else {
            upper_[e.var] = e.old_value;
            upper_depth_[e.var] = e.old_depth;
        }
        bound_log_.pop_back();
    }
}

SimplexState::PivotStatus SimplexState::pivot(VarId leaving, VarId entering,
                                              bool allow_degenerate) {
    if (!tableau_.is_basic(leaving))
        return PivotStatus::NotBasic;
    if (tableau_.is_basic(entering))
        return PivotStatus::AlreadyBasic;
    const double c = tableau_.coefficient(leaving, entering);
    if (c == 0.0)
        return PivotStatus::ZeroPivot;
    if (!allow_degenerate && std::abs(c) < options_.min_pivot_element)
        return PivotStatus::Degenerate;
    const Tableau::PivotStatus st =
        tableau_.pivot(leaving, entering, options_.drop_tolerance);
    assert(st == Tableau::PivotStatus::Ok);
    (void)st;
    ++pivot_count_;
    return PivotStatus::Ok;
}

void SimplexState::update(VarId var, double delta) {
    assert(!tableau_.is_basic(var));
    if (delta == 0.0)
        return;
    assignment_[var] += delta;
    for (VarId basic : tableau_.column(var))
        assignment_[basic] += delta * tableau_.coefficient(basic, var);
}

SimplexState::SlackSets SimplexState::slack_sets(VarId basic) const {
    SlackSets s;
    for (const auto& [var, coeff] : tableau_.row(basic)) {
        const bool can_raise = assignment_[var] < upper_[var];
        const bool can_lower = assignment_[var] > lower_[var];
        if ((coeff > 0.0 && can_raise) || (coeff < 0.0 && can_lower))
            s.increase.push_back(var);
        if ((coeff > 0.0 && can_lower) || (coeff < 0.0 && can_raise))
            s.decrease.push_back(var);
    }
    return s;
}

SimplexState::RepairResult SimplexState::repair_out_of_bounds(
    const RepairHooks* hooks) {
    RepairResult res;
    bool bland = false;
    for (;;) {
        if (hooks && hooks->keep_going && !hooks->keep_going()) {
            res.kind = RepairResult::Kind::Aborted;
            return res;
        }

        // Non-basic violations move straight onto the violated bound; the
        // landing point is inside the range, so the update guard holds.
        for (VarId v = 0; v < num_vars(); ++v) {
            if (tableau_.is_basic(v))
                continue;
            if (assignment_[v] < lower_[v])
                update(v, lower_[v] - assignment_[v]);
            else if (assignment_[v] > upper_[v])
                update(v, upper_[v] - assignment_[v]);
        }

        VarId chosen = kNoVar;
        bool need_raise = false;
        double worst = 0.0;
        for (const auto& [basic, row] : tableau_.rows()) {
            (void)row;
            double gap = 0.0;
            bool raise = false;
            if (assignment_[basic] < lower_[basic]) {
                gap = lower_[basic] - assignment_[basic];
                raise = true;
            } else if (assignment_[basic] > upper_[basic]) {
                gap = assignment_[basic] - upper_[basic];
            } else {
                continue;
            }
            if (bland) {
                chosen = basic;
                need_raise = raise;
                break;  // rows iterate in ascending order
            }
            if (gap > worst) {
                worst = gap;
                chosen = basic;
                need_raise = raise;
            }
        }
        if (chosen == kNoVar) {
            res.kind = RepairResult::Kind::AllWithinBounds;
            return res;
        }

        ++res.iterations;
        if (!bland && res.iterations > options_.bland_after)
            bland = true;

        const SlackSets sets = slack_sets(chosen);
        const std::vector<VarId>& cands =
            need_raise ? sets.increase : sets.decrease;
        if (cands.empty()) {
            res.kind = RepairResult::Kind::Infeasible;
            res.infeasible_basic = chosen;
            return res;
        }

        VarId entering = kNoVar;
        if (bland) {
            entering = cands.front();  // built in ascending VarId order
        } else {
            // Largest healthy pivot element; candidates whose projected move
            // keeps the caller's relations intact beat same-sized breakers.
            const double delta_basic =
                (need_raise ? lower_[chosen] : upper_[chosen]) -
                assignment_[chosen];
            double best = -1.0, best_keep = -1.0, best_ok = -1.0;
            VarId any = kNoVar, keep = kNoVar, ok = kNoVar;
            for (VarId cand : cands) {
                const double c = tableau_.coefficient(chosen, cand);
                const double m = std::abs(c);
                if (m > best) {
                    best = m;
                    any = cand;
                }
                if (m < options_.min_pivot_element)
                    continue;
                if (m > best_ok) {
                    best_ok = m;
                    ok = cand;
                }
                if (hooks && hooks->would_break &&
                    !hooks->would_break(cand, assignment_[cand] + delta_basic / c) &&
                    m > best_keep) {
                    best_keep = m;
                    keep = cand;
                }
            }
            entering = keep != kNoVar ? keep : (ok != kNoVar ? ok : any);
        }

        const PivotStatus st = pivot(chosen, entering, /*allow_degenerate=*/true);
        assert(st == PivotStatus::Ok);
        (void)st;
        ++res.pivots;
        update(chosen, (need_raise ? lower_[chosen] : upper_[chosen]) -
                           assignment_[chosen]);

        if (hooks && hooks->after_pivot && !hooks->after_pivot(entering)) {
            res.kind = RepairResult::Kind::Aborted;
            return res;
        }
    }
}

void SimplexState::install_restored_tableau(Tableau fresh) {
    assert(fresh.row_count() == tableau_.row_count());
    for (const auto& [basic, row] : tableau_.rows()) {
        (void)row;
        assert(fresh.is_basic(basic));
    }
    tableau_ = std::move(fresh);
    for (const auto& [basic, row] : tableau_.rows()) {
        double sum = 0.0;
        for (const auto& [var, coeff] : row)
            sum += coeff * assignment_[var];
        assignment_[basic] = sum;
    }
}

double SimplexState::max_row_residual() const {
    double worst = 0.0;
    for (const auto& [basic, row] : tableau_.rows()) {
        (void)row;
        const double r =
            std::abs(tableau_.row_value(basic, assignment_) - assignment_[basic]);
        if (r > worst)
            worst = r;
    }
    return worst;
}

}  // namespace reluplex
