#include "psp/errors.hpp"
#include "psp/maxflow.hpp"
#include "psp/oracle.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

using namespace psp;
using oracle::SetFunction;

TEST_CASE("pin entropy sums the weights of edges touching the set") {
    WeightedGraph g = testutil::triangle();
    CHECK(oracle::pin_entropy(g, VertexSet::of(3, {0})) == 6);
    CHECK(oracle::pin_entropy(g, VertexSet::of(3, {1})) == 2);
    CHECK(oracle::pin_entropy(g, VertexSet::of(3, {2})) == 6);
    CHECK(oracle::pin_entropy(g, VertexSet::of(3, {0, 1})) == 7);
    CHECK(oracle::pin_entropy(g, VertexSet::of(3, {0, 1, 2})) == 7);
    CHECK_THROWS_AS(oracle::pin_entropy(g, VertexSet(3)), InvariantError);

    SetFunction h = oracle::pin_entropy_function(g);
    CHECK(h(0b001) == 6);
    CHECK(h(0b010) == 2);
    CHECK(h(0b111) == 7);
}

TEST_CASE("pin entropy is monotone and submodular") {
    std::mt19937 rng(81801);
    for (int round = 0; round < 10; ++round) {
        int n = 2 + static_cast<int>(rng() % 4);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 6));
        SetFunction h = oracle::pin_entropy_function(g);
        std::uint32_t top = (1u << n) - 1;
        for (std::uint32_t a = 1; a <= top; ++a) {
            for (std::uint32_t b = 1; b <= top; ++b) {
                if ((a | b) == 0 || (a & b) == 0) continue;
                CHECK(h(a | b) + h(a & b) <= h(a) + h(b));
                if ((a & b) == a) CHECK(h(a) <= h(b));
            }
        }
    }
}

TEST_CASE("set function guards its domain") {
    SetFunction f(2, [](std::uint32_t) { return Rat(0); });
    CHECK_THROWS_AS(f(0), InvariantError);
    CHECK_THROWS_AS(f(0b100), InvariantError);
    CHECK_THROWS_AS(SetFunction(11, [](std::uint32_t) { return Rat(0); }), InvariantError);
    CHECK_THROWS_AS(SetFunction(0, [](std::uint32_t) { return Rat(0); }), InvariantError);
}

TEST_CASE("partition enumeration hits every set partition exactly once") {
    // Bell numbers count the partitions of an n-set.
    const int bell[] = {0, 1, 2, 5, 15, 52};
    for (int n = 1; n <= 5; ++n) {
        int count = 0;
        oracle::for_each_partition(n, [&](const std::vector<std::uint32_t>& blocks) {
            ++count;
            std::uint32_t seen = 0;
            for (std::uint32_t mask : blocks) {
                CHECK((seen & mask) == 0);
                seen |= mask;
            }
            CHECK(seen == (1u << n) - 1);
        });
        CHECK(count == bell[n]);
    }
}

TEST_CASE("partition cost golden values on the triangle") {
    SetFunction f = oracle::incut_function(orient(testutil::triangle()));
    CHECK(oracle::partition_cost(f, {0b111}, Rat(0)) == 0);
    CHECK(oracle::partition_cost(f, {0b101, 0b010}, Rat(3)) == -4);
    CHECK(oracle::partition_cost(f, {0b001, 0b010, 0b100}, Rat(6)) == -11);
}

TEST_CASE("brute dilworth returns the minimum and its finest witness") {
    SetFunction f = oracle::incut_function(orient(testutil::triangle()));

    auto [at0, p0] = oracle::brute_dilworth(f, Rat(0));
    CHECK(at0 == 0);
    CHECK(p0 == Partition::whole(3));

    auto [at3, p3] = oracle::brute_dilworth(f, Rat(3));
    CHECK(at3 == -4);
    CHECK(p3 == Partition::from_blocks(3, {VertexSet::of(3, {0, 2}), VertexSet::of(3, {1})}));

    auto [at6, p6] = oracle::brute_dilworth(f, Rat(6));
    CHECK(at6 == -11);
    CHECK(p6 == Partition::singletons(3));

    // At the crossing the optimum is tied; the finest witness wins.
    auto [at2, p2] = oracle::brute_dilworth(f, Rat(2));
    CHECK(at2 == -2);
    CHECK(p2 == Partition::from_blocks(3, {VertexSet::of(3, {0, 2}), VertexSet::of(3, {1})}));
}

TEST_CASE("brute mmi golden on the triangle") {
    auto [value, partition] = oracle::brute_mmi(testutil::triangle());
    CHECK(value == 2);
    CHECK(partition ==
          Partition::from_blocks(3, {VertexSet::of(3, {0, 2}), VertexSet::of(3, {1})}));
    // The all-singletons split normalizes to (6+2+6-7)/2.
    SetFunction h = oracle::pin_entropy_function(testutil::triangle());
    Rat singles = (h(0b001) + h(0b010) + h(0b100) - h(0b111)) / 2;
    CHECK(singles == Rat(7) / 2);
    CHECK(value < singles);
}

TEST_CASE("brute psp walks the triangle envelope") {
    SetFunction f = oracle::incut_function(orient(testutil::triangle()));
    PartitionFunction psp = oracle::brute_psp(f);
    REQUIRE(psp.criticals == std::vector<Rat>{Rat(2), Rat(5)});
    CHECK(psp.partitions[0] == Partition::whole(3));
    CHECK(psp.partitions[1] ==
          Partition::from_blocks(3, {VertexSet::of(3, {0, 2}), VertexSet::of(3, {1})}));
    CHECK(psp.partitions[2] == Partition::singletons(3));

    PartitionFunction viaEntropy =
        oracle::brute_psp(oracle::pin_entropy_function(testutil::triangle()));
    CHECK(viaEntropy.criticals == psp.criticals);
    REQUIRE(viaEntropy.partitions.size() == psp.partitions.size());
    for (size_t k = 0; k < psp.partitions.size(); ++k) {
        CHECK(viaEntropy.partitions[k] == psp.partitions[k]);
    }
}

TEST_CASE("brute min cut enumerates sink sides") {
    flow::FlowNet d3(4);
    d3.add_arc(0, 1, Rat(1));
    d3.add_arc(1, 2, Rat(1));
    d3.add_arc(1, 3, Rat(5));
    d3.add_arc(2, 3, Rat(1));
    auto [v3, t3] = oracle::brute_min_cut(d3, 0, 3);
    CHECK(v3 == 1);
    CHECK(t3 == VertexSet::of(4, {1, 2, 3}));

    // Tie between {2} and {1,2}; the minimal sink side is reported.
    flow::FlowNet d2(3);
    d2.add_arc(0, 1, Rat(1));
    d2.add_arc(1, 2, Rat(1));
    auto [v2, t2] = oracle::brute_min_cut(d2, 0, 2);
    CHECK(v2 == 1);
    CHECK(t2 == VertexSet::of(3, {2}));

    flow::FlowNet hollow(3);
    auto [v0, t0] = oracle::brute_min_cut(hollow, 0, 2);
    CHECK(v0 == 0);
    CHECK(t0 == VertexSet::of(3, {2}));
}
