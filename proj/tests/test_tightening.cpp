#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "reluplex/tightening.hpp"

using namespace reluplex;

namespace {

doctest::Approx near(double v) { return doctest::Approx(v).epsilon(1e-9); }

LinearAtom atom(std::initializer_list<std::pair<VarId, double>> terms,
                Relation rel, double constant) {
    LinearAtom a;
    for (const auto& [v, c] : terms)
        a.add_term(v, c);
    a.relation = rel;
    a.constant = constant;
    return a;
}

// One undecided pair over two fresh variables plus its linkage row.
struct PairFixture {
    SimplexState state;
    ReluSystem relus;

    PairFixture()
        : state(SimplexState::init_configuration(2, {})),
          relus({ReluPair{0, 1}}) {
        relus.allocate_linkage(state);
    }
};

}  // namespace

TEST_CASE("row interval derivation hits the corner values") {
    // a = 2x - 3y with x in [0,1], y in [-1,2]: a in [-6, 5]
    SimplexState s = oracle::make_state(
        2, {atom({{0, 2.0}, {1, -3.0}}, Relation::LessEq, 100.0)},
        {{0, 0.0, 1.0}, {1, -1.0, 2.0}});
    BoundTightener t;
    const auto r = t.tighten_row(s, 2);
    CHECK_FALSE(r.conflict.has_value());
    CHECK(r.derived == 2);
    CHECK(s.lower(2) == near(-6.0));
    CHECK(s.upper(2) == near(5.0));

    REQUIRE(t.log_size() == 2);
    CHECK(t.log()[0].var == 2);
    CHECK(t.log()[0].kind == BoundKind::Lower);
    CHECK(t.log()[0].value == near(-6.0));
    CHECK(t.log()[0].source_row == 2);
    CHECK(t.log()[0].depth == 0);
    CHECK(t.log()[1].kind == BoundKind::Upper);

    // idempotent: nothing strictly tighter remains
    const auto again = t.tighten_row(s, 2);
    CHECK(again.derived == 0);
}

TEST_CASE("a side with any infinite contribution is skipped") {
    SUBCASE("fully free term kills both sides") {
        SimplexState s = oracle::make_state(
            2, {atom({{0, 2.0}, {1, -3.0}}, Relation::LessEq, 100.0)},
            {{0, 0.0, 1.0}});
        BoundTightener t;
        CHECK(t.tighten_row(s, 2).derived == 0);
        CHECK(s.lower(2) == -kInfinity);
        CHECK(s.upper(2) == near(100.0));
    }
    SUBCASE("one-sided bound keeps exactly one side") {
        // y has only an upper bound; coeff(y) < 0, so only lower(a) forms
        SimplexState s = oracle::make_state(
            2, {atom({{0, 2.0}, {1, -3.0}}, Relation::LessEq, 100.0)},
            {{0, 0.0, 1.0}, {1, -kInfinity, 2.0}});
        BoundTightener t;
        const auto r = t.tighten_row(s, 2);
        CHECK(r.derived == 1);
        CHECK(s.lower(2) == near(-6.0));
        CHECK(s.upper(2) == near(100.0));
    }
}

TEST_CASE("candidates inside the margin are not installed") {
    SimplexState s = oracle::make_state(
        2, {atom({{0, 2.0}, {1, -3.0}}, Relation::LessEq, 100.0)},
        {{0, 0.0, 1.0}, {1, -1.0, 2.0}});
    s.set_lower(2, -6.0 - 1e-13);  // candidate -6 is only 1e-13 tighter
    const std::size_t events = s.bound_log_size();
    BoundTightener t;
    const auto r = t.tighten_row(s, 2);
    CHECK(r.derived == 1);  // the upper side still fires
    CHECK(s.lower(2) == near(-6.0 - 1e-13));
    CHECK(s.bound_log_size() == events + 1);
}

TEST_CASE("derived bound crossing an asserted one is a conflict") {
    SimplexState s = oracle::make_state(
        1, {atom({{0, 1.0}}, Relation::LessEq, 10.0)}, {{0, 2.0, 3.0}});
    s.set_depth(3);
    REQUIRE_FALSE(s.set_upper(1, 1.0).has_value());
    s.set_depth(5);
    BoundTightener t;
    const auto r = t.tighten_row(s, 1);
    REQUIRE(r.conflict.has_value());
    CHECK(r.conflict->var == 1);
    CHECK(r.conflict->lower == near(2.0));
    CHECK(r.conflict->upper == near(1.0));
    CHECK(r.conflict->lower_depth == 5);
    CHECK(r.conflict->upper_depth == 3);
    CHECK(r.conflict->cause_depth() == 5);
}

TEST_CASE("phase assertions: active pins linkage, inactive pins forward") {
    PairFixture f;
    const auto active = f.relus.phase_assertions(0, Phase::Active);
    REQUIRE(active.size() == 3);
    CHECK(active[0].var == 0);
    CHECK(active[0].kind == BoundKind::Lower);
    CHECK(active[0].value == 0.0);
    CHECK(active[1].var == f.relus.pair(0).linkage);
    CHECK(active[1].kind == BoundKind::Lower);
    CHECK(active[2].var == f.relus.pair(0).linkage);
    CHECK(active[2].kind == BoundKind::Upper);

    const auto inactive = f.relus.phase_assertions(0, Phase::Inactive);
    REQUIRE(inactive.size() == 3);
    CHECK(inactive[0].var == 0);
    CHECK(inactive[0].kind == BoundKind::Upper);
    CHECK(inactive[1].var == 1);
    CHECK(inactive[1].kind == BoundKind::Upper);
    CHECK(inactive[2].var == 1);
    CHECK(inactive[2].kind == BoundKind::Lower);
}

TEST_CASE("phase elimination from bound evidence") {
    SUBCASE("positive backward lower forces active") {
        PairFixture f;
        f.state.set_lower(0, 0.5);
        BoundTightener t;
        const auto r =
            t.tighten_pass(f.state, f.relus, BoundTightener::Scope::FullTableau);
        CHECK_FALSE(r.conflict.has_value());
        CHECK(r.eliminated == 1);
        CHECK(f.relus.pair(0).phase == Phase::Active);
        const VarId e = f.relus.pair(0).linkage;
        CHECK(f.state.lower(e) == 0.0);
        CHECK(f.state.upper(e) == 0.0);
        CHECK(f.state.lower(0) == near(0.5));  // stronger bound survives
    }
    SUBCASE("positive forward lower forces active") {
        PairFixture f;
        f.state.set_lower(1, 0.25);
        BoundTightener t;
        const auto r =
            t.tighten_pass(f.state, f.relus, BoundTightener::Scope::FullTableau);
        CHECK(r.eliminated == 1);
        CHECK(f.relus.pair(0).phase == Phase::Active);
        CHECK(f.state.lower(0) == 0.0);
    }
    SUBCASE("negative backward upper forces inactive") {
        PairFixture f;
        f.state.set_upper(0, -0.5);
        BoundTightener t;
        const auto r =
            t.tighten_pass(f.state, f.relus, BoundTightener::Scope::FullTableau);
        CHECK(r.eliminated == 1);
        CHECK(f.relus.pair(0).phase == Phase::Inactive);
        CHECK(f.state.lower(1) == 0.0);
        CHECK(f.state.upper(1) == 0.0);
    }
    SUBCASE("contradictory evidence surfaces as a backward crossing") {
        PairFixture f;
        f.state.set_lower(1, 0.5);   // forward says active
        f.state.set_upper(0, -0.5);  // backward says inactive
        BoundTightener t;
        const auto r =
            t.tighten_pass(f.state, f.relus, BoundTightener::Scope::FullTableau);
        REQUIRE(r.conflict.has_value());
        CHECK(r.conflict->var == 0);
        CHECK(r.conflict->lower == 0.0);
        CHECK(r.conflict->upper == near(-0.5));
    }
    SUBCASE("decided pairs are left alone") {
        PairFixture f;
        f.relus.pair_mut(0).phase = Phase::Inactive;
        f.state.set_lower(0, 0.5);  // would force active if undecided
        BoundTightener t;
        const auto r =
            t.tighten_pass(f.state, f.relus, BoundTightener::Scope::FullTableau);
        CHECK(r.eliminated == 0);
        CHECK(f.relus.pair(0).phase == Phase::Inactive);
    }
}

TEST_CASE("entering-only scope touches just the entering row") {
    SimplexState s = oracle::make_state(
        2,
        {atom({{0, 1.0}}, Relation::LessEq, 100.0),
         atom({{1, 1.0}}, Relation::LessEq, 100.0)},
        {{0, 0.0, 1.0}, {1, 0.0, 1.0}});
    ReluSystem none;
    BoundTightener t;
    SUBCASE("non-basic entering derives nothing") {
        const auto r =
            t.tighten_pass(s, none, BoundTightener::Scope::EnteringOnly, 0);
        CHECK(r.derived == 0);
    }
    SUBCASE("basic entering tightens only its own row") {
        const auto r =
            t.tighten_pass(s, none, BoundTightener::Scope::EnteringOnly, 2);
        CHECK(r.derived == 2);
        CHECK(s.upper(2) == near(1.0));
        CHECK(s.upper(3) == near(100.0));  // the other row was not visited
    }
}

TEST_CASE("full sweeps stop at the fixpoint") {
    SimplexState s = oracle::make_state(
        2,
        {atom({{0, 1.0}}, Relation::LessEq, 100.0),
         atom({{1, -2.0}}, Relation::LessEq, 100.0)},
        {{0, 0.0, 1.0}, {1, -1.0, 1.0}});
    ReluSystem none;
    BoundTightener t;
    const auto first =
        t.tighten_pass(s, none, BoundTightener::Scope::FullTableau);
    CHECK(first.derived == 4);
    const auto second =
        t.tighten_pass(s, none, BoundTightener::Scope::FullTableau);
    CHECK(second.derived == 0);
}

TEST_CASE("derived bounds never exclude oracle-feasible points") {
    std::mt19937 rng(31337);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const oracle::LpInstance inst = oracle::random_lp(rng);
        const auto reference =
            oracle::vertex_feasible(inst.num_vars, inst.atoms, inst.boxes);
        if (!reference.feasible)
            continue;
        ++checked;

        std::vector<oracle::BoundSpec> bounds;
        for (VarId v = 0; v < inst.num_vars; ++v)
            bounds.push_back({v, inst.boxes[v].lo, inst.boxes[v].hi});
        SimplexState s = oracle::make_state(inst.num_vars, inst.atoms, bounds);

        // snapshot, tighten, monotonicity
        std::vector<double> lo_before, hi_before;
        for (VarId v = 0; v < s.num_vars(); ++v) {
            lo_before.push_back(s.lower(v));
            hi_before.push_back(s.upper(v));
        }
        ReluSystem none;
        BoundTightener t;
        const auto r = t.tighten_pass(s, none, BoundTightener::Scope::FullTableau);
        CHECK_FALSE(r.conflict.has_value());
        for (VarId v = 0; v < s.num_vars(); ++v) {
            CHECK(s.lower(v) >= lo_before[v]);
            CHECK(s.upper(v) <= hi_before[v]);
        }

        // the oracle witness (problem vars + implied aux values) stays inside
        for (VarId v = 0; v < inst.num_vars; ++v) {
            CHECK(reference.witness[v] >= s.lower(v) - 1e-6);
            CHECK(reference.witness[v] <= s.upper(v) + 1e-6);
        }
        for (std::size_t i = 0; i < inst.atoms.size(); ++i) {
            double value = 0.0;
            for (const auto& [v, c] : inst.atoms[i].coeffs)
                value += c * reference.witness[v];
            const VarId aux = inst.num_vars + static_cast<VarId>(i);
            CHECK(value >= s.lower(aux) - 1e-6);
            CHECK(value <= s.upper(aux) + 1e-6);
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("under-approximation shrinks ranges and snaps near phases") {
    SUBCASE("plain shrink keeps the pair undecided") {
        PairFixture f;
        f.state.set_lower(0, -1.0);
        f.state.set_upper(0, 1.0);
        CHECK_FALSE(under_approximate(f.state, f.relus, 0.01).has_value());
        CHECK(f.relus.pair(0).phase == Phase::Undecided);
        CHECK(f.state.lower(0) == near(-0.99));
        CHECK(f.state.upper(0) == near(0.99));
    }
    SUBCASE("backward lower within eps of zero snaps active") {
        PairFixture f;
        f.state.set_lower(0, -0.005);
        f.state.set_upper(0, 2.0);
        CHECK_FALSE(under_approximate(f.state, f.relus, 0.01).has_value());
        CHECK(f.relus.pair(0).phase == Phase::Active);
        CHECK(f.state.lower(0) == 0.0);
    }
    SUBCASE("tiny forward upper snaps inactive") {
        PairFixture f;
        f.state.set_lower(1, 0.0);
        f.state.set_upper(1, 0.004);
        CHECK_FALSE(under_approximate(f.state, f.relus, 0.01).has_value());
        CHECK(f.relus.pair(0).phase == Phase::Inactive);
        CHECK(f.state.upper(1) == 0.0);
    }
    SUBCASE("decided pairs are untouched") {
        PairFixture f;
        f.relus.pair_mut(0).phase = Phase::Active;
        f.state.set_lower(0, -1.0);
        f.state.set_upper(0, 1.0);
        CHECK_FALSE(under_approximate(f.state, f.relus, 0.01).has_value());
        CHECK(f.state.lower(0) == near(-1.0));
        CHECK(f.state.upper(0) == near(1.0));
    }
    SUBCASE("eps of zero is a no-op") {
        PairFixture f;
        f.state.set_lower(0, -1.0);
        CHECK_FALSE(under_approximate(f.state, f.relus, 0.0).has_value());
        CHECK(f.state.lower(0) == near(-1.0));
        CHECK(f.relus.pair(0).phase == Phase::Undecided);
    }
}
