#include <cmath>
#include <vector>

#include "doctest.h"
#include "reluplex/robustness.hpp"

using namespace reluplex;

namespace {

std::string fixture(const char* name) { return std::string(FIXTURES_DIR) + "/" + name; }

// s1 = relu(-x), s2 = relu(x): argmin label is 0 for x >= 0 and 1 for x < 0.
Network boundary_net() { return load_network(fixture("boundary.net")); }

}  // namespace

TEST_CASE("classify picks the lowest score, ties to the smaller index") {
    CHECK(classify({3.0, 1.0, 2.0}) == 1);
    CHECK(classify({1.0, 1.0}) == 0);
    CHECK(classify({-2.0}) == 0);
    CHECK(classify({3.0, 1.0, 2.0}, /*argmax=*/true) == 0);
    CHECK(classify({1.0, 5.0, 5.0}, true) == 1);
    CHECK_THROWS_AS(classify({}), std::invalid_argument);
}

TEST_CASE("local check certifies and refutes around the boundary") {
    const Network net = boundary_net();

    SUBCASE("robust radius") {
        const RobustnessResult r = check_local(net, {0.5}, 0.4);
        CHECK(r.label == 0);
        CHECK(r.robust);
        CHECK_FALSE(r.inconclusive);
    }
    SUBCASE("fragile radius yields a replaying adversarial") {
        const RobustnessResult r = check_local(net, {0.5}, 0.6);
        CHECK(r.label == 0);
        REQUIRE_FALSE(r.robust);
        CHECK(r.adversarial_label == 1);
        CHECK(r.counterexample.replay_ok);
        CHECK(r.counterexample.inputs[0] <= -9e-7);  // genuinely past the boundary
        CHECK(std::abs(r.counterexample.inputs[0] - 0.5) <= 0.6 + 1e-9);
        CHECK(classify(r.counterexample.outputs) != r.label);
    }
    SUBCASE("argmax flips the label") {
        const RobustnessResult r = check_local(net, {0.5}, 0.4, {.argmax = true});
        CHECK(r.label == 1);
        CHECK(r.robust);
        const RobustnessResult f = check_local(net, {0.5}, 0.6, {.argmax = true});
        REQUIRE_FALSE(f.robust);
        CHECK(f.adversarial_label == 0);
        CHECK(classify(f.counterexample.outputs, true) == 0);
    }
}

TEST_CASE("local check validates its inputs") {
    const Network net = boundary_net();
    CHECK_THROWS_AS(check_local(net, {0.5}, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(check_local(net, {0.5, 0.5}, 0.1), std::invalid_argument);
    const Network scalar = parse_network("layers 1 1\nweights 2\n1\nbiases 2\n0\n");
    CHECK_THROWS_AS(check_local(scalar, {0.5}, 0.1), std::invalid_argument);
}

TEST_CASE("local verdicts match a dense grid oracle") {
    const Network net = boundary_net();
    const double deltas[] = {0.05, 0.2, 0.5};
    const double points[] = {-0.8, -0.45, -0.1, 0.0, 0.15, 0.5, 0.9};
    int checked = 0;
    for (double x0 : points)
        for (double delta : deltas) {
            const unsigned label = classify(net.forward({x0}));
            bool oracle_robust = true;
            for (int g = 0; g <= 200; ++g) {
                const double x = x0 - delta + (2.0 * delta) * g / 200.0;
                if (classify(net.forward({x})) != label) oracle_robust = false;
            }
            const RobustnessResult r = check_local(net, {x0}, delta);
            CAPTURE(x0);
            CAPTURE(delta);
            REQUIRE_FALSE(r.inconclusive);
            CHECK(r.robust == oracle_robust);
            if (!r.robust) CHECK(classify(r.counterexample.outputs) != r.label);
            ++checked;
        }
    CHECK(checked == 21);
}

TEST_CASE("radius search brackets the boundary distance") {
    const Network net = boundary_net();
    const RadiusSearch s = search_local_radius(net, {0.5}, 2.0, 1e-3);
    CHECK_FALSE(s.inconclusive);
    // True boundary distance is 0.5: robust below, adversarial above.
    CHECK(s.robust_delta <= 0.5 + 1e-3);
    CHECK(s.robust_delta >= 0.5 - 1e-3);
    CHECK(s.fragile_delta >= s.robust_delta);
    CHECK(s.fragile_delta <= 0.5 + 2e-3);
    CHECK(s.queries >= 11);  // log2(2 / 1e-3) bisection steps
    CHECK(classify(s.last_failure.counterexample.outputs) != s.last_failure.label);
}

TEST_CASE("radius search degenerate endpoints") {
    const Network net = boundary_net();
    SUBCASE("robust all the way to max_delta") {
        const RadiusSearch s = search_local_radius(net, {0.5}, 0.3, 1e-3);
        CHECK(s.robust_delta == 0.3);
        CHECK(s.fragile_delta == 0.0);
        CHECK(s.queries == 1);
    }
    SUBCASE("fragile from the start") {
        // x0 = 0 sits on the boundary; any visible radius is fragile.
        const RadiusSearch s = search_local_radius(net, {0.0}, 1.0, 1e-3);
        CHECK(s.robust_delta <= 1e-3);
        CHECK(s.fragile_delta <= 2e-3);
        CHECK_FALSE(s.last_failure.robust);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(search_local_radius(net, {0.5}, 0.0, 1e-3), std::invalid_argument);
        CHECK_THROWS_AS(search_local_radius(net, {0.5}, 1.0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("doubled network runs two independent copies") {
    const Network twin = doubled_network(boundary_net());
    REQUIRE(twin.layer_sizes == std::vector<unsigned>{2, 4, 4});
    const auto out = twin.forward({0.3, -0.7});
    CHECK(out[0] == doctest::Approx(0.0));   // relu(-0.3)
    CHECK(out[1] == doctest::Approx(0.3));   // relu(0.3)
    CHECK(out[2] == doctest::Approx(0.7));   // relu(0.7)
    CHECK(out[3] == doctest::Approx(0.0));   // relu(-0.7)
}

TEST_CASE("global robustness respects the Lipschitz bound of a scaling map") {
    // y = 0.5 x: inputs delta apart move outputs by exactly half that.
    const Network net = parse_network("layers 1 1\nweights 2\n0.5\nbiases 2\n0\n");

    SUBCASE("certified when epsilon exceeds the reachable drift") {
        const GlobalRobustnessResult r = check_global(net, {-1.0}, {1.0}, 0.5, 0.3);
        CHECK(r.robust);
        CHECK_FALSE(r.inconclusive);
    }
    SUBCASE("refuted with a witnessing pair") {
        const GlobalRobustnessResult r = check_global(net, {-1.0}, {1.0}, 0.5, 0.2);
        REQUIRE_FALSE(r.robust);
        CHECK(r.output == 0);
        REQUIRE(r.pair_witness.inputs.size() == 2);
        REQUIRE(r.pair_witness.outputs.size() == 2);
        CHECK(std::abs(r.pair_witness.inputs[0] - r.pair_witness.inputs[1]) <= 0.5 + 1e-6);
        CHECK(std::abs(r.pair_witness.outputs[0] - r.pair_witness.outputs[1]) >= 0.2 - 1e-6);
        CHECK(r.pair_witness.replay_ok);
    }
}

TEST_CASE("global robustness names the drifting output") {
    // y1 = 0.1 x stays tame, y2 = 2 x drifts.
    const Network net = parse_network("layers 1 2\nweights 2\n0.1\n2\nbiases 2\n0 0\n");
    const GlobalRobustnessResult r = check_global(net, {0.0}, {1.0}, 0.4, 0.5);
    REQUIRE_FALSE(r.robust);
    CHECK(r.output == 1);
    CHECK(std::abs(r.pair_witness.outputs[1] - r.pair_witness.outputs[3]) >= 0.5 - 1e-6);
}

TEST_CASE("global robustness handles relu saturation") {
    // y = relu(x): flat for x <= 0, slope 1 beyond.
    const Network net =
        parse_network("layers 1 1 1\nweights 2\n1\nbiases 2\n0\nweights 3\n1\nbiases 3\n0\n");
    SUBCASE("flat region is robust for any epsilon") {
        const GlobalRobustnessResult r = check_global(net, {-5.0}, {0.0}, 3.0, 0.1);
        CHECK(r.robust);
    }
    SUBCASE("sloped region is not") {
        const GlobalRobustnessResult r = check_global(net, {-5.0}, {5.0}, 3.0, 0.5);
        REQUIRE_FALSE(r.robust);
        CHECK(std::abs(r.pair_witness.inputs[0] - r.pair_witness.inputs[1]) <= 3.0 + 1e-6);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(check_global(net, {0.0}, {1.0}, -1.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(check_global(net, {0.0}, {1.0}, 1.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(check_global(net, {0.0, 1.0}, {1.0, 2.0}, 1.0, 0.1),
                        std::invalid_argument);
    }
}
