#include "reluplex/engine.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace reluplex {

Engine::Engine(SimplexState state, std::vector<ReluPair> pairs,
               EngineOptions options)
    : state_(std::move(state)),
      relus_(std::move(pairs)),
      tightener_(options.tighten),
      roundoff_(options.roundoff),
      trace_(options.trace),
      stack_(state_, relus_, tightener_, &trace_),
      options_(options) {
    state_.set_options(options.simplex);
    for (const ReluPair& p : relus_.pairs()) {
        if (p.backward >= state_.num_vars() || p.forward >= state_.num_vars())
            throw std::out_of_range("relu pair references unknown variable");
    }
}

std::optional<Conflict> Engine::prepare() {
    relus_.allocate_linkage(state_);
    if (options_.under_approx_epsilon > 0.0) {
        if (std::optional<Conflict> c = under_approximate(
                state_, relus_, options_.under_approx_epsilon))
            return c;
    }
    if (options_.initial_tighten) {
        BoundTightener::PassResult r = tightener_.tighten_pass(
            state_, relus_, BoundTightener::Scope::FullTableau);
        stats_.derived_bounds += r.derived;
        if (r.conflict)
            return r.conflict;
    }
    return std::nullopt;
}

std::vector<std::size_t> Engine::relu_violations() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < relus_.size(); ++i) {
        const ReluPair& p = relus_.pair(i);
        if (p.phase != Phase::Undecided)
            continue;
        const double want = std::max(0.0, state_.assignment(p.backward));
        if (std::abs(state_.assignment(p.forward) - want) >
            options_.relu_tolerance)
            out.push_back(i);
    }
    return out;
}

Engine::RepairAction Engine::repair_relu(std::size_t pair) {
    ReluPair& p = relus_.pair_mut(pair);
    if (p.repair_count >= options_.split_threshold)
        return RepairAction::NeedsSplit;

    const double alpha_b = state_.assignment(p.backward);
    const double alpha_f = state_.assignment(p.forward);

    if (!state_.is_basic(p.backward) && alpha_f >= 0.0) {
        state_.update(p.backward, alpha_f - alpha_b);
        ++p.repair_count;
        return RepairAction::UpdatedBackward;
    }
    if (!state_.is_basic(p.forward)) {
        state_.update(p.forward, std::max(0.0, alpha_b) - alpha_f);
        ++p.repair_count;
        return RepairAction::UpdatedForward;
    }

    // Forward is basic: pivot it out against the largest row element, then
    // set its value directly.
    const Tableau::Row& row = state_.tableau().row(p.forward);
    if (row.empty())
        throw std::logic_error("relu repair: basic variable with empty row");
    VarId entering = kNoVar, fallback = kNoVar;
    double best = -1.0, best_any = -1.0;
    for (const auto& [var, coeff] : row) {
        const double m = std::abs(coeff);
        if (m > best_any) {
            best_any = m;
            fallback = var;
        }
        if (m >= state_.options().min_pivot_element && m > best) {
            best = m;
            entering = var;
        }
    }
    if (entering == kNoVar)
        entering = fallback;
    const SimplexState::PivotStatus st =
        state_.pivot(p.forward, entering, /*allow_degenerate=*/true);
    assert(st == SimplexState::PivotStatus::Ok);
    (void)st;
    state_.update(p.forward,
                  std::max(0.0, state_.assignment(p.backward)) -
                      state_.assignment(p.forward));
    ++p.repair_count;
    return RepairAction::PivotedThenUpdated;
}

Engine::SplitCases Engine::split_relu(std::size_t pair) const {
    const ReluPair& p = relus_.pair(pair);
    if (p.phase != Phase::Undecided)
        throw std::logic_error("split on a phase-fixed pair");
    if (!(state_.lower(p.backward) < 0.0 && state_.upper(p.backward) > 0.0))
        throw std::logic_error("split requires the backward range to straddle zero");
    return SplitCases{relus_.phase_assertions(pair, Phase::Active),
                      relus_.phase_assertions(pair, Phase::Inactive)};
}

bool Engine::phase_forced_by_bounds(std::size_t pair, Phase* out) const {
    const ReluPair& p = relus_.pair(pair);
    if (state_.lower(p.backward) >= 0.0 || state_.lower(p.forward) > 0.0) {
        *out = Phase::Active;
        return true;
    }
    if (state_.upper(p.backward) <= 0.0) {
        *out = Phase::Inactive;
        return true;
    }
    return false;
}

std::size_t Engine::choose_split_pair(
    const std::vector<std::size_t>& viols) const {
    std::size_t chosen = viols.front();
    double widest = -1.0;
    for (std::size_t i : viols) {
        const ReluPair& p = relus_.pair(i);
        if (p.repair_count < options_.split_threshold)
            continue;
        const double width = state_.upper(p.backward) - state_.lower(p.backward);
        if (width > widest) {
            widest = width;
            chosen = i;
        }
    }
    return chosen;
}

bool Engine::verify_witness(const std::vector<double>& a,
                            double tolerance) const {
    if (a.size() != state_.num_vars())
        return false;
    for (const auto& [basic, row] : state_.initial_tableau().rows()) {
        double sum = 0.0;
        for (const auto& [var, coeff] : row)
            sum += coeff * a[var];
        if (std::abs(sum - a[basic]) > tolerance)
            return false;
    }
    for (VarId v = 0; v < state_.num_vars(); ++v) {
        if (a[v] < state_.lower(v) - tolerance ||
            a[v] > state_.upper(v) + tolerance)
            return false;
    }
    for (const ReluPair& p : relus_.pairs()) {
        if (std::abs(a[p.forward] - std::max(0.0, a[p.backward])) > tolerance)
            return false;
    }
    return true;
}

SolveResult Engine::solve() {
    using Clock = std::chrono::steady_clock;
    const Clock::time_point start = Clock::now();

    SolveResult result;
    result.under_approximate = options_.under_approx_epsilon > 0.0;

    const auto elapsed = [&] {
        return std::chrono::duration<double>(Clock::now() - start).count();
    };
    const auto over_budget = [&] {
        if (options_.cancel && options_.cancel->load(std::memory_order_relaxed))
            return true;
        if (options_.max_pivots && state_.pivot_count() >= options_.max_pivots)
            return true;
        return options_.timeout_seconds > 0.0 &&
               elapsed() > options_.timeout_seconds;
    };
    const auto finish = [&](Verdict v) {
        result.verdict = v;
        stats_.pivots = state_.pivot_count();
        stats_.total_splits = stack_.total_splits();
        stats_.max_stack_depth = stack_.max_depth();
        stats_.wall_seconds = elapsed();
        result.stats = stats_;
        return result;
    };

    std::optional<Conflict> pending;

    if (!prepared_) {
        prepared_ = true;
        pending = prepare();
        if (pending) {
            ++stats_.conflicts;
            if (stack_.handle_conflict(*pending) == SplitStack::Outcome::RootUnsat)
                return finish(Verdict::Unsat);
            pending.reset();
        }
    }

    std::uint64_t last_full_tighten = state_.pivot_count();
    SimplexState::RepairHooks hooks;
    hooks.keep_going = [&] { return !over_budget(); };
    hooks.would_break = [&](VarId var, double value) {
        for (const ReluPair& p : relus_.pairs()) {
            if (p.phase != Phase::Undecided)
                continue;
            if (var == p.backward) {
                const double f = state_.assignment(p.forward);
                const double now = std::max(0.0, state_.assignment(var));
                return std::abs(f - now) <= options_.relu_tolerance &&
                       std::abs(f - std::max(0.0, value)) >
                           options_.relu_tolerance;
            }
            if (var == p.forward) {
                const double want = std::max(0.0, state_.assignment(p.backward));
                return std::abs(state_.assignment(var) - want) <=
                           options_.relu_tolerance &&
                       std::abs(value - want) > options_.relu_tolerance;
            }
        }
        return false;
    };
    hooks.after_pivot = [&](VarId entering) {
        BoundTightener::PassResult r = tightener_.tighten_pass(
            state_, relus_, BoundTightener::Scope::EnteringOnly, entering);
        stats_.derived_bounds += r.derived;
        if (r.conflict) {
            pending = r.conflict;
            return false;
        }
        if (state_.pivot_count() >= last_full_tighten + options_.tighten_cadence) {
            last_full_tighten = state_.pivot_count();
            r = tightener_.tighten_pass(state_, relus_,
                                        BoundTightener::Scope::FullTableau);
            stats_.derived_bounds += r.derived;
            if (r.conflict) {
                pending = r.conflict;
                return false;
            }
        }
        if (roundoff_.check_and_maybe_restore(state_) ==
            RoundoffMonitor::CheckResult::Restored)
            ++stats_.tableau_restorations;
        return !over_budget();
    };

    bool retried_restore = false;
    bool retried_infeasible = false;
    for (;;) {
        if (over_budget())
            return finish(Verdict::Timeout);

        pending.reset();
        std::optional<Conflict> conflict;
        const SimplexState::RepairResult rr = state_.repair_out_of_bounds(&hooks);
        if (rr.kind != SimplexState::RepairResult::Kind::Infeasible)
            retried_infeasible = false;

        if (rr.kind == SimplexState::RepairResult::Kind::Aborted) {
            if (pending)
                conflict = pending;
            else
                return finish(Verdict::Timeout);
        } else if (rr.kind == SimplexState::RepairResult::Kind::Infeasible) {
            // Empty slack set: the current bound set is linearly infeasible,
            // provided the stuck variable's value is trustworthy. Incremental
            // updates drift, and a hard bound turns that drift into a false
            // certificate, so restore once (recomputing basics from rows)
            // and only believe a verdict that survives the rebuild.
            if (!retried_infeasible) {
                retried_infeasible = true;
                restore_tableau(state_);
                ++stats_.tableau_restorations;
                continue;
            }
            retried_infeasible = false;
            // No bound pair to blame, so the cause is the present depth.
            const VarId v = rr.infeasible_basic;
            conflict = Conflict{v, state_.lower(v), state_.upper(v),
                                stack_.depth(), stack_.depth()};
        }

        if (!conflict) {
            const std::vector<std::size_t> viols = relu_violations();
            if (viols.empty()) {
                result.witness = state_.assignment_vector();
                result.witness_verified =
                    verify_witness(result.witness, options_.witness_tolerance);
                if (!result.witness_verified && !retried_restore) {
                    retried_restore = true;
                    restore_tableau(state_);
                    ++stats_.tableau_restorations;
                    continue;
                }
                return finish(Verdict::Sat);
            }

            std::size_t pick = viols.front();
            unsigned min_count =
                relus_.pair(pick).repair_count;
            for (std::size_t i : viols) {
                if (relus_.pair(i).repair_count < min_count) {
                    min_count = relus_.pair(i).repair_count;
                    pick = i;
                }
            }

            if (min_count >= options_.split_threshold) {
                const std::size_t sp = choose_split_pair(viols);
                Phase forced = Phase::Undecided;
                if (phase_forced_by_bounds(sp, &forced)) {
                    conflict = relus_.fix_phase(state_, sp, forced);
                } else {
                    const SplitCase first =
                        state_.assignment(relus_.pair(sp).backward) >= 0.0
                            ? SplitCase::Active
                            : SplitCase::Inactive;
                    conflict = stack_.push(sp, first);
                }
                if (!conflict)
                    continue;
            } else {
                repair_relu(pick);
                ++stats_.relu_repairs;
                if (roundoff_.check_and_maybe_restore(state_) ==
                    RoundoffMonitor::CheckResult::Restored)
                    ++stats_.tableau_restorations;
                continue;
            }
        }

        ++stats_.conflicts;
        if (options_.chronological_backtracking) {
            conflict->lower_depth = stack_.depth();
            conflict->upper_depth = stack_.depth();
        }
        if (stack_.handle_conflict(*conflict) == SplitStack::Outcome::RootUnsat)
            return finish(Verdict::Unsat);
    }
}

}  // namespace reluplex
