#include "reluplex/tightening.hpp"

#include <cmath>

namespace reluplex {

BoundTightener::PassResult BoundTightener::tighten_row(SimplexState& state,
                                                       VarId basic) {
    PassResult res;
    const Tableau::Row& row = state.tableau().row(basic);

    double lo = 0.0, hi = 0.0;
    bool lo_finite = true, hi_finite = true;
    for (const auto& [var, coeff] : row) {
        const double l = state.lower(var), u = state.upper(var);
        const double toward_lo = coeff > 0.0 ? l : u;
        const double toward_hi = coeff > 0.0 ? u : l;
        if (std::isinf(toward_lo))
            lo_finite = false;
        else
            lo += coeff * toward_lo;
        if (std::isinf(toward_hi))
            hi_finite = false;
        else
            hi += coeff * toward_hi;
        if (!lo_finite && !hi_finite)
            return res;
    }

    if (lo_finite && lo > state.lower(basic) + options_.margin) {
        std::optional<Conflict> c = state.set_lower(basic, lo);
        log_.push_back({basic, BoundKind::Lower, lo, basic, state.depth()});
        ++res.derived;
        if (c) {
            res.conflict = c;
            return res;
        }
    }
    if (hi_finite && hi < state.upper(basic) - options_.margin) {
        std::optional<Conflict> c = state.set_upper(basic, hi);
        log_.push_back({basic, BoundKind::Upper, hi, basic, state.depth()});
        ++res.derived;
        if (c)
            res.conflict = c;
    }
    return res;
}

std::optional<Conflict> BoundTightener::eliminate_relu_phases(
    SimplexState& state, ReluSystem& relus) {
    for (std::size_t i = 0; i < relus.size(); ++i) {
        const ReluPair& p = relus.pair(i);
        if (p.phase != Phase::Undecided)
            continue;
        const bool active_evidence =
            state.lower(p.backward) > 0.0 || state.lower(p.forward) > 0.0;
        const bool inactive_evidence = state.upper(p.backward) < 0.0;
        // With both kinds of evidence the Active fix crosses the backward
        // upper bound, surfacing the contradiction through normal channels.
        if (active_evidence) {
            if (std::optional<Conflict> c =
                    relus.fix_phase(state, i, Phase::Active))
                return c;
        } else if (inactive_evidence) {
            if (std::optional<Conflict> c =
                    relus.fix_phase(state, i, Phase::Inactive))
                return c;
        }
    }
    return std::nullopt;
}

BoundTightener::PassResult BoundTightener::tighten_pass(SimplexState& state,
                                                        ReluSystem& relus,
                                                        Scope scope,
                                                        VarId entering) {
    PassResult total;
    if (scope == Scope::EnteringOnly) {
        if (entering != kNoVar && state.is_basic(entering)) {
            total = tighten_row(state, entering);
            if (total.conflict)
                return total;
        }
    } else {
        for (unsigned sweep = 0; sweep < options_.max_sweeps; ++sweep) {
            unsigned derived_this_sweep = 0;
            // Row set is stable within a sweep: tightening never pivots.
            for (const auto& [basic, row] : state.tableau().rows()) {
                (void)row;
                PassResult r = tighten_row(state, basic);
                total.derived += r.derived;
                derived_this_sweep += r.derived;
                if (r.conflict) {
                    total.conflict = r.conflict;
                    return total;
                }
            }
            if (derived_this_sweep == 0)
                break;
        }
    }

    const std::size_t before = relus.undecided_count();
    if (std::optional<Conflict> c = eliminate_relu_phases(state, relus)) {
        total.conflict = c;
        return total;
    }
    total.eliminated +=
        static_cast<unsigned>(before - relus.undecided_count());
    return total;
}

std::optional<Conflict> under_approximate(SimplexState& state,
                                          ReluSystem& relus, double eps) {
    if (eps <= 0.0)
        return std::nullopt;
    for (std::size_t i = 0; i < relus.size(); ++i) {
        const ReluPair p = relus.pair(i);
        if (p.phase != Phase::Undecided)
            continue;
        const double lb = state.lower(p.backward);
        const double ub = state.upper(p.backward);
        const double uf = state.upper(p.forward);

        if (lb >= -eps && lb < 0.0) {
            if (std::optional<Conflict> c = relus.fix_phase(state, i, Phase::Active))
                return c;
        } else if (std::isfinite(lb)) {
            if (std::optional<Conflict> c = state.set_lower(p.backward, lb + eps))
                return c;
        }

        if (relus.pair(i).phase != Phase::Undecided)
            continue;
        if (uf > 0.0 && uf <= eps) {
            if (std::optional<Conflict> c = relus.fix_phase(state, i, Phase::Inactive))
                return c;
        } else if (std::isfinite(ub)) {
            if (std::optional<Conflict> c = state.set_upper(p.backward, ub - eps))
                return c;
        }
    }
    return std::nullopt;
}

}  // namespace reluplex
