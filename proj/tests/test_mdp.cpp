#include "mdpgeom/mdp.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace mdpgeom;
using namespace mdpgeom::testing;

TEST_CASE("validate_model") {
    SUBCASE("exact stochastic rows are valid") {
        CHECK(validate_model(swap_model()).empty());
    }
    SUBCASE("row sum 1.1 is reported") {
        MdpModel m(2, {sap(0, 0, {0.5, 0.6}), sap(1, 0, {1, 0})}, 1.0);
        const auto v = validate_model(m);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == "sap 0: row sum 1.1 != 1");
    }
    SUBCASE("state without SAP") {
        MdpModel m(2, {sap(0, 0, {1, 0})}, 1.0);
        const auto v = validate_model(m);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == "state 1 without SAP");
    }
    SUBCASE("out-of-range state, bad gamma, wrong row length, negative entry") {
        MdpModel m(2, {sap(0, 0, {1, 0}), sap(1, 0, {1, 0}), sap(5, 0, {1, 0}), sap(1, 0, {1}), sap(0, 0, {1.5, -0.5})},
                   1.5);
        CHECK(validate_model(m).size() == 5);
        CHECK_THROWS_AS(require_valid(m), ValidationError);
    }
    SUBCASE("row sums within 1e-12 pass, beyond fail") {
        CHECK(validate_model(MdpModel(2, {sap(0, 0, {0.5, 0.5 + 5e-13}), sap(1, 0, {0, 1})}, 0.9)).empty());
        CHECK(validate_model(MdpModel(2, {sap(0, 0, {0.5, 0.5 + 5e-12}), sap(1, 0, {0, 1})}, 0.9)).size() == 1);
    }
}

TEST_CASE("policy_kernel and policy_rewards") {
    const auto m = swap_with_loop();
    CHECK(policy_kernel(m, policy({0, 1})) == mat({{0, 1}, {1, 0}}));
    CHECK(policy_kernel(m, policy({2, 1})) == mat({{1, 0}, {1, 0}}));
    CHECK(policy_kernel(two_loops(0.5), policy({0, 1})) == Matrix::Identity(2, 2));

    CHECK(policy_rewards(m, policy({0, 1})) == Vector{{2.0, 0.0}});
    CHECK(policy_rewards(m.with_rewards({0, 0, 0}), policy({0, 1})) == Vector::Zero(2));
    CHECK(policy_rewards(MdpModel(1, {sap(0, 1.0, {1})}, 1.0), policy({0})) == Vector{{1.0}});

    CHECK_THROWS_AS(policy_kernel(m, policy({1, 1})), InvalidPolicyError);
    CHECK_THROWS_AS(policy_kernel(m, policy({0, 7})), InvalidPolicyError);
    CHECK_THROWS_AS(policy_rewards(m, policy({0})), InvalidPolicyError);
}

TEST_CASE("kernel rows are the chosen SAP rows bit for bit") {
    const auto m = random_model(11, 5, 3, 0.9, 0.3);
    for (const auto& pi : enumerate_policies(m)) {
        const Matrix P = policy_kernel(m, pi);
        for (std::size_t s = 0; s < 5; ++s)
            for (std::size_t j = 0; j < 5; ++j) REQUIRE(P(s, j) == m.sap(pi.choice[s]).probs[j]);
    }
}

TEST_CASE("span") {
    CHECK(span(Vector{{2.0, 0.0}}) == 2.0);
    CHECK(span(Vector::Constant(4, 3.25)) == 0.0);
    CHECK(span(Vector{{-1.0, 3.0, 0.5}}) == 4.0);
    CHECK_THROWS_AS(span(Vector(0)), DomainError);
}

TEST_CASE("span is a seminorm") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 500; ++trial) {
        Vector v(1 + trial % 7);
        for (auto& x : v) x = u(rng);
        const double c = u(rng), alpha = std::abs(u(rng));
        CHECK(span(v.array() + c) == doctest::Approx(span(v)).epsilon(1e-12));
        CHECK(span(alpha * v) == doctest::Approx(alpha * span(v)).epsilon(1e-12));
        CHECK(span(v) >= 0.0);
    }
}

TEST_CASE("enumerate_policies") {
    CHECK(enumerate_policies(swap_model()).size() == 1);
    CHECK(enumerate_policies(swap_with_loop()).size() == 2);

    const auto m = random_model(1, 3, 2, 0.9, 0.0);
    std::vector<Policy> all(enumerate_policies(m).begin(), enumerate_policies(m).end());
    REQUIRE(all.size() == 8);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(std::set<Policy>(all.begin(), all.end()).size() == 8);
    CHECK(all.front() == policy({0, 2, 4}));
    CHECK(all.back() == policy({1, 3, 5}));

    SUBCASE("interleaved SAPs keep lexicographic order") {
        MdpModel im(2, {sap(1, 0, {1, 0}), sap(0, 0, {1, 0}), sap(1, 0, {0, 1}), sap(0, 0, {0, 1})}, 0.5);
        std::vector<Policy> got(enumerate_policies(im).begin(), enumerate_policies(im).end());
        CHECK(got == std::vector<Policy>{policy({1, 0}), policy({1, 2}), policy({3, 0}), policy({3, 2})});
    }
    SUBCASE("count equals product of SAP counts") {
        MdpModel uneven(3, {sap(0, 0, {1, 0, 0}), sap(1, 0, {1, 0, 0}), sap(1, 0, {1, 0, 0}), sap(2, 0, {1, 0, 0}),
                            sap(2, 0, {1, 0, 0}), sap(2, 0, {1, 0, 0})},
                        1.0);
        std::size_t count = 0;
        for (const auto& pi : enumerate_policies(uneven)) {
            check_policy(uneven, pi);
            ++count;
        }
        CHECK(count == 6);
    }
    SUBCASE("cap") {
        const auto big = random_model(2, 10, 4, 0.9, 0.5);
        CHECK_THROWS_AS(enumerate_policies(big), EnumerationTooLargeError);
        CHECK_NOTHROW(enumerate_policies(big, 1u << 20));
    }
}
