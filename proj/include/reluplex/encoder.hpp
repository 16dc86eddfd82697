#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "reluplex/engine.hpp"
#include "reluplex/network.hpp"
#include "reluplex/query.hpp"

namespace reluplex {

inline constexpr std::size_t kNoDisjunct = static_cast<std::size_t>(-1);

// Variable layout of an encoded network. Problem variables come first:
// inputs, then per hidden layer all backward values followed by all forward
// values, then outputs. Auxiliary row variables (one per atom) and linkage
// variables are allocated past num_problem_vars by the simplex setup.
struct VarMap {
    std::vector<VarId> inputs;
    std::vector<std::vector<VarId>> backward;  // per hidden layer
    std::vector<std::vector<VarId>> forward;
    std::vector<VarId> outputs;
    unsigned num_problem_vars = 0;
    std::vector<std::string> names;  // one per problem variable

    VarId input(std::size_t i) const { return inputs.at(i); }
    VarId output(std::size_t j) const { return outputs.at(j); }
    std::string name(VarId v) const {
        if (v < names.size()) return names[v];
        return "aux" + std::to_string(v);
    }
};

// Network plus query lowered to simplex atoms, working in normalized units.
// Node rows read node_var - sum(w * prev) = bias; ReLU pairs carry no linkage
// yet (the engine allocates it). Disjunct groups stay separate: exactly one
// group is appended to the base atoms per solver run.
struct EncodedQuery {
    VarMap vars;
    std::vector<LinearAtom> atoms;
    std::vector<ReluPair> pairs;
    std::vector<std::pair<VarId, double>> lower_bounds, upper_bounds;
    std::vector<std::vector<LinearAtom>> disjunct_atoms;
};

EncodedQuery encode(const Network& net, const Query& q);

// Fresh simplex state over the encoding, with the chosen disjunct group's
// atoms appended (kNoDisjunct for none).
SimplexState build_state(const EncodedQuery& enc, std::size_t disjunct = kNoDisjunct);

struct DecodedWitness {
    std::vector<double> inputs_normalized, outputs_normalized;
    std::vector<double> inputs, outputs;  // raw units
    bool replay_ok = false;  // forward(inputs_normalized) matched the outputs
    double max_replay_error = 0.0;
};

DecodedWitness decode_witness(const EncodedQuery& enc, const Network& net,
                              const Query& q, const std::vector<double>& assignment,
                              double tolerance);

struct QueryResult {
    Verdict verdict = Verdict::Timeout;
    std::size_t sat_disjunct = kNoDisjunct;  // group that answered Sat
    DecodedWitness witness;
    SolveStats totals;       // summed over all groups attempted
    bool under_approximate = false;
    bool witness_verified = false;
};

struct SolveQueryOptions {
    EngineOptions engine;
    unsigned jobs = 1;  // disjunct groups solved in parallel
};

// Decides the query: SAT when some disjunct group (or the plain conjunctive
// problem) is satisfiable. Sequential runs short-circuit on the first SAT;
// parallel runs cancel the remaining groups once one answers SAT.
QueryResult solve_query(const Network& net, const Query& q,
                        const SolveQueryOptions& options = SolveQueryOptions());

}  // namespace reluplex
