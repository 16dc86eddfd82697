#pragma once

#include <optional>
#include <vector>

#include "reluplex/simplex.hpp"

namespace reluplex {

enum class Phase { Undecided, Active, Inactive };

// A ReLU connection forward = max(0, backward). `linkage` is an auxiliary
// variable whose row reads forward - backward; pinching it to [0,0] turns the
// active case into a plain linear constraint the simplex enforces on its own.
struct ReluPair {
    VarId backward = kNoVar;
    VarId forward = kNoVar;
    VarId linkage = kNoVar;
    Phase phase = Phase::Undecided;
    unsigned repair_count = 0;
};

struct BoundAssertion {
    VarId var;
    BoundKind kind;
    double value;
};

class ReluSystem {
public:
    ReluSystem() = default;
    explicit ReluSystem(std::vector<ReluPair> pairs) : pairs_(std::move(pairs)) {}

    std::size_t size() const { return pairs_.size(); }
    const ReluPair& pair(std::size_t i) const { return pairs_[i]; }
    ReluPair& pair_mut(std::size_t i) { return pairs_[i]; }
    const std::vector<ReluPair>& pairs() const { return pairs_; }

    // Adds one linkage row per pair to the state. Call once, before search.
    void allocate_linkage(SimplexState& state);

    // The bound changes a phase fix applies. Active: backward >= 0 and the
    // linkage pinched to zero. Inactive: backward <= 0 and forward pinched
    // to zero.
    std::vector<BoundAssertion> phase_assertions(std::size_t i, Phase phase) const;

    // Marks the phase and applies its assertions. Returns the first bound
    // crossing encountered, if any; remaining assertions are still applied so
    // the journal stays consistent for backtracking.
    std::optional<Conflict> fix_phase(SimplexState& state, std::size_t i,
                                      Phase phase);

    std::vector<Phase> phases() const;
    std::vector<unsigned> repair_counts() const;
    void restore(const std::vector<Phase>& phases,
                 const std::vector<unsigned>& counts);

    std::size_t undecided_count() const;

private:
    std::vector<ReluPair> pairs_;
};

}  // namespace reluplex
