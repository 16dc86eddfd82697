#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "reluplex/network.hpp"
#include "reluplex/query.hpp"

namespace reluplex {

// 3-SAT instance in DIMACS conventions: positive literal v is variable v,
// negative -v its negation. Short clauses are padded by repeating a literal,
// which leaves their semantics unchanged.
struct CnfFormula {
    unsigned num_vars = 0;
    std::vector<std::array<int, 3>> clauses;
};

struct DimacsParseError : std::runtime_error {
    explicit DimacsParseError(const std::string& message) : std::runtime_error(message) {}
};

CnfFormula parse_dimacs(const std::string& text);
CnfFormula load_dimacs(const std::string& path);

bool eval_clause(const std::array<int, 3>& clause, const std::vector<bool>& assignment);
bool eval_formula(const CnfFormula& f, const std::vector<bool>& assignment);

// Exhaustive model search, num_vars capped at 24.
std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f);

// Satisfiability of the formula rephrased as reachability on a ReLU network.
//
// Inputs x_j range over [0,1]. One hidden layer holds, in order: a clause
// node per clause with pre-activation 1 - |neg| + sum(neg x) - sum(pos x),
// then u_j = 2 x_j - 1, then p_j = x_j. Outputs: y_i = 1 - relu(clause_i),
// then g_j = relu(p_j) - relu(u_j) = min(x_j, 1 - x_j). The query asks for
// y_i >= 1 - epsilon (every clause nearly satisfied) and g_j <= epsilon
// (every input within epsilon of boolean). Rounding a witness to booleans is
// sound for epsilon < 1/4: an unsatisfied clause keeps its node at
// 1 - 3 epsilon > epsilon.
struct SatReduction {
    Network network;
    Query query;
    double epsilon = 0.0;
    unsigned num_vars = 0;
    unsigned num_clauses = 0;
};

// epsilon = 0 picks the default min(0.01, 1 / (num_vars + 4)).
SatReduction reduce_to_query(const CnfFormula& f, double epsilon = 0.0);

// Rounds witness inputs to booleans, requiring each to sit within epsilon
// (plus float slack) of 0 or 1.
std::vector<bool> decode_boolean_witness(const SatReduction& r,
                                         const std::vector<double>& inputs);

}  // namespace reluplex
