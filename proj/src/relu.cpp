#include "reluplex/relu.hpp"

#include <cassert>
#include <stdexcept>

namespace reluplex {

void ReluSystem::allocate_linkage(SimplexState& state) {
    for (ReluPair& p : pairs_) {
        if (p.linkage != kNoVar)
            continue;
        SparseVector form;
        form.emplace(p.forward, 1.0);
        form.emplace(p.backward, -1.0);
        p.linkage = state.add_structural_row(form, -kInfinity, kInfinity);
    }
}

std::vector<BoundAssertion> ReluSystem::phase_assertions(std::size_t i,
                                                         Phase phase) const {
    const ReluPair& p = pairs_[i];
    std::vector<BoundAssertion> out;
    if (phase == Phase::Active) {
        out.push_back({p.backward, BoundKind::Lower, 0.0});
        if (p.linkage != kNoVar) {
            out.push_back({p.linkage, BoundKind::Lower, 0.0});
            out.push_back({p.linkage, BoundKind::Upper, 0.0});
        }
    } else if (phase == Phase::Inactive) {
        out.push_back({p.backward, BoundKind::Upper, 0.0});
        out.push_back({p.forward, BoundKind::Upper, 0.0});
        out.push_back({p.forward, BoundKind::Lower, 0.0});
    }
    return out;
}

std::optional<Conflict> ReluSystem::fix_phase(SimplexState& state,
                                              std::size_t i, Phase phase) {
    assert(phase != Phase::Undecided);
    ReluPair& p = pairs_[i];
    p.phase = phase;
    std::optional<Conflict> first;
    for (const BoundAssertion& a : phase_assertions(i, phase)) {
        std::optional<Conflict> c = a.kind == BoundKind::Lower
                                        ? state.set_lower(a.var, a.value)
                                        : state.set_upper(a.var, a.value);
        if (c && !first)
            first = c;
    }
    return first;
}

std::vector<Phase> ReluSystem::phases() const {
    std::vector<Phase> out;
    out.reserve(pairs_.size());
    for (const ReluPair& p : pairs_)
        out.push_back(p.phase);
    return out;
}

std::vector<unsigned> ReluSystem::repair_counts() const {
    std::vector<unsigned> out;
    out.reserve(pairs_.size());
    for (const ReluPair& p : pairs_)
        out.push_back(p.repair_count);
    return out;
}

void ReluSystem::restore(const std::vector<Phase>& phases,
                         const std::vector<unsigned>& counts) {
    if (phases.size() != pairs_.size() || counts.size() != pairs_.size())
        throw std::logic_error("relu snapshot size mismatch");
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        pairs_[i].phase = phases[i];
        pairs_[i].repair_count = counts[i];
    }
}

std::size_t ReluSystem::undecided_count() const {
    std::size_t n = 0;
    for (const ReluPair& p : pairs_)
        n += p.phase == Phase::Undecided;
    return n;
}

}  // namespace reluplex
