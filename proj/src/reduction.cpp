#include "reluplex/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace reluplex {

CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CnfFormula f;
    long declared_clauses = -1;
    std::vector<int> current;
    unsigned line_no = 0;

    const auto flush_clause = [&](unsigned at_line) {
        if (current.empty()) throw DimacsParseError("line " + std::to_string(at_line) + ": empty clause");
        if (current.size() > 3)
            throw DimacsParseError("line " + std::to_string(at_line) + ": clause has " +
                                   std::to_string(current.size()) + " literals, at most 3 allowed");
        std::array<int, 3> clause;
        for (std::size_t i = 0; i < 3; ++i)
            clause[i] = i < current.size() ? current[i] : current.back();
        f.clauses.push_back(clause);
        current.clear();
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok[0] == 'c' && declared_clauses < 0) continue;  // "cNOTE" style comments
        if (tok == "p") {
            std::string kind;
            long nv = 0;
            if (declared_clauses >= 0)
                throw DimacsParseError("line " + std::to_string(line_no) + ": duplicate header");
            std::string leftover;
            if (!(ls >> kind >> nv >> declared_clauses) || kind != "cnf" || nv < 0 ||
                declared_clauses < 0 || (ls >> leftover))
                throw DimacsParseError("line " + std::to_string(line_no) +
                                       ": malformed header, expected 'p cnf <vars> <clauses>'");
            f.num_vars = static_cast<unsigned>(nv);
            continue;
        }
        if (declared_clauses < 0)
            throw DimacsParseError("line " + std::to_string(line_no) +
                                   ": clause before 'p cnf' header");
        ls.clear();
        ls.seekg(0);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                flush_clause(line_no);
                continue;
            }
            const unsigned v = static_cast<unsigned>(std::abs(lit));
            if (v > f.num_vars)
                throw DimacsParseError("line " + std::to_string(line_no) + ": literal " +
                                       std::to_string(lit) + " exceeds declared " +
                                       std::to_string(f.num_vars) + " variables");
            current.push_back(lit);
        }
        if (!ls.eof()) {
            std::string bad;
            ls.clear();
            ls >> bad;
            throw DimacsParseError("line " + std::to_string(line_no) + ": unexpected token '" +
                                   bad + "'");
        }
    }
    if (!current.empty())
        throw DimacsParseError("last clause is missing its terminating 0");
    if (declared_clauses < 0) throw DimacsParseError("missing 'p cnf' header");
    if (f.clauses.size() != static_cast<std::size_t>(declared_clauses))
        throw DimacsParseError("header declares " + std::to_string(declared_clauses) +
                               " clauses, found " + std::to_string(f.clauses.size()));
    return f;
}

CnfFormula load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cnf file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_dimacs(buf.str());
    } catch (const DimacsParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

bool eval_clause(const std::array<int, 3>& clause, const std::vector<bool>& assignment) {
    for (int lit : clause) {
        const bool v = assignment.at(static_cast<std::size_t>(std::abs(lit)) - 1);
        if (lit > 0 ? v : !v) return true;
    }
    return false;
}

bool eval_formula(const CnfFormula& f, const std::vector<bool>& assignment) {
    for (const auto& c : f.clauses)
        if (!eval_clause(c, assignment)) return false;
    return true;
}

std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f) {
    if (f.num_vars > 24) throw std::invalid_argument("brute force capped at 24 variables");
    const std::uint64_t limit = std::uint64_t(1) << f.num_vars;
    std::vector<bool> assignment(f.num_vars);
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        for (unsigned j = 0; j < f.num_vars; ++j) assignment[j] = (mask >> j) & 1;
        if (eval_formula(f, assignment)) return assignment;
    }
    return std::nullopt;
}

SatReduction reduce_to_query(const CnfFormula& f, double epsilon) {
    if (f.num_vars == 0 || f.clauses.empty())
        throw std::invalid_argument("reduction needs at least one variable and one clause");
    const unsigned n = f.num_vars;
    const unsigned k = static_cast<unsigned>(f.clauses.size());
    if (epsilon == 0.0) epsilon = std::min(0.01, 1.0 / (n + 4));
    // Rounding soundness: an unsatisfied clause's node reads at least
    // 1 - 3 epsilon and must stay above epsilon.
    if (epsilon <= 0.0 || epsilon >= 0.25)
        throw std::invalid_argument("reduction epsilon must lie in (0, 0.25)");

    SatReduction r;
    r.epsilon = epsilon;
    r.num_vars = n;
    r.num_clauses = k;

    Network& net = r.network;
    net.layer_sizes = {n, k + 2 * n, k + n};

    // Hidden layer: clause nodes, then u_j = 2 x_j - 1, then p_j = x_j.
    std::vector<std::vector<double>> W1(k + 2 * n, std::vector<double>(n, 0.0));
    std::vector<double> b1(k + 2 * n, 0.0);
    for (unsigned i = 0; i < k; ++i) {
        double bias = 1.0;
        for (int lit : f.clauses[i]) {
            const unsigned j = static_cast<unsigned>(std::abs(lit)) - 1;
            if (lit > 0) {
                W1[i][j] -= 1.0;
            } else {
                W1[i][j] += 1.0;
                bias -= 1.0;
            }
        }
        b1[i] = bias;
    }
    for (unsigned j = 0; j < n; ++j) {
        W1[k + j][j] = 2.0;
        b1[k + j] = -1.0;
        W1[k + n + j][j] = 1.0;
    }
    net.weights.push_back(std::move(W1));
    net.biases.push_back(std::move(b1));

    // Outputs: y_i = 1 - clause_i^f, then g_j = p_j^f - u_j^f.
    std::vector<std::vector<double>> W2(k + n, std::vector<double>(k + 2 * n, 0.0));
    std::vector<double> b2(k + n, 0.0);
    for (unsigned i = 0; i < k; ++i) {
        W2[i][i] = -1.0;
        b2[i] = 1.0;
    }
    for (unsigned j = 0; j < n; ++j) {
        W2[k + j][k + n + j] = 1.0;
        W2[k + j][k + j] = -1.0;
    }
    net.weights.push_back(std::move(W2));
    net.biases.push_back(std::move(b2));
    net.validate();

    Query& q = r.query;
    q.name = "3sat-reduction";
    q.input_lower.assign(n, 0.0);
    q.input_upper.assign(n, 1.0);
    for (unsigned i = 0; i < k; ++i) {
        std::vector<double> coeffs(k + n, 0.0);
        coeffs[i] = 1.0;
        q.output_constraints.push_back({coeffs, Relation::GreaterEq, 1.0 - epsilon});
    }
    for (unsigned j = 0; j < n; ++j) {
        std::vector<double> coeffs(k + n, 0.0);
        coeffs[k + j] = 1.0;
        q.output_constraints.push_back({coeffs, Relation::LessEq, epsilon});
    }
    return r;
}

std::vector<bool> decode_boolean_witness(const SatReduction& r,
                                         const std::vector<double>& inputs) {
    if (inputs.size() != r.num_vars)
        throw std::invalid_argument("witness size does not match the reduced formula");
    const double slack = r.epsilon + 1e-6;
    std::vector<bool> out(r.num_vars);
    for (unsigned j = 0; j < r.num_vars; ++j) {
        const double v = inputs[j];
        if (v >= -1e-6 && v <= slack) {
            out[j] = false;
        } else if (v >= 1.0 - slack && v <= 1.0 + 1e-6) {
            out[j] = true;
        } else {
            throw std::runtime_error("witness input " + std::to_string(j + 1) +
                                     " is not near-boolean: " + std::to_string(v));
        }
    }
    return out;
}

}  // namespace reluplex
