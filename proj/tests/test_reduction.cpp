#include <random>

#include "doctest.h"
#include "reluplex/encoder.hpp"
#include "reluplex/reduction.hpp"

using namespace reluplex;

namespace {

std::string fixture(const char* name) { return std::string(FIXTURES_DIR) + "/" + name; }

CnfFormula random_formula(std::mt19937& rng, unsigned max_vars, unsigned max_clauses) {
    std::uniform_int_distribution<unsigned> nv(1, max_vars);
    std::uniform_int_distribution<unsigned> nc(1, max_clauses);
    CnfFormula f;
    f.num_vars = nv(rng);
    const unsigned k = nc(rng);
    std::uniform_int_distribution<unsigned> var(1, f.num_vars);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<unsigned> width(1, 3);
    for (unsigned i = 0; i < k; ++i) {
        const unsigned w = width(rng);
        std::array<int, 3> clause;
        for (unsigned j = 0; j < 3; ++j) {
            if (j < w || j == 0) {
                const int v = static_cast<int>(var(rng));
                clause[j] = coin(rng) ? v : -v;
            } else {
                clause[j] = clause[j - 1];  // padding repeats a literal
            }
        }
        f.clauses.push_back(clause);
    }
    return f;
}

}  // namespace

TEST_CASE("dimacs fixture parses with padding") {
    const CnfFormula f = load_dimacs(fixture("example.cnf"));
    CHECK(f.num_vars == 4);
    REQUIRE(f.clauses.size() == 5);
    CHECK(f.clauses[0] == std::array<int, 3>{1, -2, 3});
    CHECK(f.clauses[1] == std::array<int, 3>{-1, 2, 2});  // short clause padded
    CHECK(f.clauses[4] == std::array<int, 3>{1, 4, 4});
}

TEST_CASE("dimacs parser accepts clauses spanning lines") {
    const CnfFormula f = parse_dimacs("p cnf 2 2\n1\n-2 0 2\n1 0\n");
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == std::array<int, 3>{1, -2, -2});
    CHECK(f.clauses[1] == std::array<int, 3>{2, 1, 1});
}

TEST_CASE("dimacs parser rejects malformed input") {
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), DimacsParseError);          // no header
    CHECK_THROWS_AS(parse_dimacs("p cnf 2\n"), DimacsParseError);        // short header
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1 9\n"), DimacsParseError);    // long header
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n0\n"), DimacsParseError);   // empty clause
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), DimacsParseError); // literal range
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -1 2 2 0\n"), DimacsParseError);  // too wide
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), DimacsParseError); // count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), DimacsParseError); // missing 0
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), DimacsParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\np cnf 2 1\n"), DimacsParseError);
}

TEST_CASE("formula evaluation and brute force agree on knowns") {
    CnfFormula contradiction;
    contradiction.num_vars = 1;
    contradiction.clauses = {{1, 1, 1}, {-1, -1, -1}};
    CHECK_FALSE(brute_force_sat(contradiction).has_value());

    const CnfFormula f = load_dimacs(fixture("example.cnf"));
    const auto model = brute_force_sat(f);
    REQUIRE(model.has_value());
    CHECK(eval_formula(f, *model));

    CnfFormula wide;
    wide.num_vars = 25;
    wide.clauses = {{1, 1, 1}};
    CHECK_THROWS_AS(brute_force_sat(wide), std::invalid_argument);
}

TEST_CASE("reduction emits the documented shape") {
    const CnfFormula f = load_dimacs(fixture("example.cnf"));  // n=4, k=5
    const SatReduction r = reduce_to_query(f);
    CHECK(r.network.layer_sizes == std::vector<unsigned>{4, 13, 9});
    CHECK(r.epsilon == 0.01);  // min(0.01, 1/8)
    CHECK(r.query.input_lower == std::vector<double>(4, 0.0));
    CHECK(r.query.input_upper == std::vector<double>(4, 1.0));
    REQUIRE(r.query.output_constraints.size() == 9);
    CHECK(r.query.output_constraints[0].relation == Relation::GreaterEq);
    CHECK(r.query.output_constraints[0].constant == 0.99);
    CHECK(r.query.output_constraints[5].relation == Relation::LessEq);
    CHECK(r.query.output_constraints[5].constant == 0.01);
    CHECK(r.query.disjuncts.empty());
}

TEST_CASE("reduction parameter validation") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses = {{1, 2, 2}};
    CHECK_THROWS_AS(reduce_to_query(f, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(reduce_to_query(f, -0.1), std::invalid_argument);
    CHECK(reduce_to_query(f, 0.2).epsilon == 0.2);
    CHECK(reduce_to_query(f).epsilon == std::min(0.01, 1.0 / 6));

    CnfFormula empty;
    empty.num_vars = 2;
    CHECK_THROWS_AS(reduce_to_query(empty), std::invalid_argument);
}

TEST_CASE("forward pass on boolean inputs mirrors clause truth") {
    std::mt19937 rng(24601);
    for (int trial = 0; trial < 40; ++trial) {
        const CnfFormula f = random_formula(rng, 6, 8);
        const SatReduction r = reduce_to_query(f);
        std::vector<bool> assignment(f.num_vars);
        for (unsigned j = 0; j < f.num_vars; ++j) assignment[j] = rng() & 1;
        std::vector<double> x(f.num_vars);
        for (unsigned j = 0; j < f.num_vars; ++j) x[j] = assignment[j] ? 1.0 : 0.0;

        const auto out = r.network.forward(x);
        const unsigned k = r.num_clauses;
        for (unsigned i = 0; i < k; ++i) {
            const bool sat = eval_clause(f.clauses[i], assignment);
            // Boolean inputs make every node integral, so the comparison is exact.
            if (sat) {
                CHECK(out[i] == 1.0);
            } else {
                CHECK(out[i] == 0.0);
            }
        }
        for (unsigned j = 0; j < f.num_vars; ++j) CHECK(out[k + j] == 0.0);
    }
}

TEST_CASE("reduced query satisfiability matches brute force") {
    std::mt19937 rng(1956);
    int sat_seen = 0, unsat_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const CnfFormula f = random_formula(rng, 6, 8);
        const SatReduction r = reduce_to_query(f);
        const bool expected = brute_force_sat(f).has_value();
        const QueryResult res = solve_query(r.network, r.query);
        CAPTURE(trial);
        REQUIRE(res.verdict == (expected ? Verdict::Sat : Verdict::Unsat));
        if (expected) {
            ++sat_seen;
            REQUIRE(res.witness_verified);
            const std::vector<bool> decoded = decode_boolean_witness(r, res.witness.inputs);
            CHECK(eval_formula(f, decoded));
        } else {
            ++unsat_seen;
        }
    }
    CHECK(sat_seen > 10);
    CHECK(unsat_seen > 5);
}

TEST_CASE("decode rejects non-boolean witnesses") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses = {{1, -2, -2}};
    const SatReduction r = reduce_to_query(f);
    CHECK_THROWS_AS(decode_boolean_witness(r, {0.5, 1.0}), std::runtime_error);
    CHECK_THROWS_AS(decode_boolean_witness(r, {1.0}), std::invalid_argument);
    const std::vector<bool> ok = decode_boolean_witness(r, {1.0 - r.epsilon / 2, 0.004});
    CHECK(ok == std::vector<bool>{true, false});
}

TEST_CASE("unit clauses pin their variable") {
    CnfFormula f;
    f.num_vars = 2;
    f.clauses = {{1, 1, 1}, {-2, -2, -2}};
    const SatReduction r = reduce_to_query(f);
    const QueryResult res = solve_query(r.network, r.query);
    REQUIRE(res.verdict == Verdict::Sat);
    const std::vector<bool> decoded = decode_boolean_witness(r, res.witness.inputs);
    CHECK(decoded == std::vector<bool>{true, false});
}
