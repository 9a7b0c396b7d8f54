#include "psp/clustering.hpp"
#include "psp/errors.hpp"
#include "psp/oracle.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace psp;

TEST_CASE("triangle clusters across the threshold range") {
    PartitionFunction psp = compute_psp(testutil::triangle());

    auto low = clusters_at(psp, Rat(1));
    REQUIRE(low.size() == 1);
    CHECK(low[0] == VertexSet::of(3, {0, 1, 2}));

    auto mid = clusters_at(psp, Rat(3));
    REQUIRE(mid.size() == 1);
    CHECK(mid[0] == VertexSet::of(3, {0, 2}));

    // Intervals are left-closed: the new partition applies at its own gamma.
    auto edge = clusters_at(psp, Rat(2));
    REQUIRE(edge.size() == 1);
    CHECK(edge[0] == VertexSet::of(3, {0, 2}));

    CHECK(clusters_at(psp, Rat(5)).empty());
    CHECK(clusters_at(psp, Rat(100)).empty());
}

TEST_CASE("triangle fundamental partition and mmi") {
    PartitionFunction psp = compute_psp(testutil::triangle());
    auto [gamma, partition] = fundamental_partition(psp);
    CHECK(gamma == 2);
    CHECK(partition ==
          Partition::from_blocks(3, {VertexSet::of(3, {0, 2}), VertexSet::of(3, {1})}));
    CHECK(mmi(testutil::triangle()) == 2);
}

TEST_CASE("hierarchy rows cover the gamma axis in order") {
    PartitionFunction psp = compute_psp(testutil::triangle());
    std::vector<HierarchyRow> rows = hierarchy(psp);
    REQUIRE(rows.size() == 3);

    CHECK(!rows[0].lo.has_value());
    REQUIRE(rows[0].hi.has_value());
    CHECK(*rows[0].hi == 2);
    CHECK(rows[0].partition == Partition::whole(3));
    REQUIRE(rows[0].clusters.size() == 1);

    REQUIRE(rows[1].lo.has_value());
    CHECK(*rows[1].lo == 2);
    REQUIRE(rows[1].hi.has_value());
    CHECK(*rows[1].hi == 5);
    REQUIRE(rows[1].clusters.size() == 1);
    CHECK(rows[1].clusters[0] == VertexSet::of(3, {0, 2}));

    REQUIRE(rows[2].lo.has_value());
    CHECK(*rows[2].lo == 5);
    CHECK(!rows[2].hi.has_value());
    CHECK(rows[2].partition == Partition::singletons(3));
    CHECK(rows[2].clusters.empty());
}

TEST_CASE("a disconnected graph has zero mutual information") {
    CHECK(mmi(testutil::two_components()) == 0);
    PartitionFunction psp = compute_psp(testutil::two_components());
    auto [gamma, partition] = fundamental_partition(psp);
    CHECK(gamma == 0);
    CHECK(partition ==
          Partition::from_blocks(4, {VertexSet::of(4, {0, 1}), VertexSet::of(4, {2, 3})}));
}

TEST_CASE("mmi and fundamental partition match the entropy oracle") {
    std::mt19937 rng(71701);
    for (int round = 0; round < 60; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 7));
        auto [value, partition] = oracle::brute_mmi(g);
        CAPTURE(round);
        CHECK(mmi(g) == value);
        auto [gamma, fundamental] = fundamental_partition(compute_psp(g));
        CHECK(gamma == value);
        CHECK(fundamental == partition);
        CHECK(value > 0); // connected instances always share information
    }
}

TEST_CASE("clusters from different thresholds are laminar") {
    std::mt19937 rng(71702);
    for (int round = 0; round < 20; ++round) {
        int n = 3 + static_cast<int>(rng() % 4);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 6));
        PartitionFunction psp = compute_psp(g);

        std::vector<VertexSet> all;
        for (const auto& row : hierarchy(psp)) {
            for (const auto& c : row.clusters) all.push_back(c);
        }
        for (size_t a = 0; a < all.size(); ++a) {
            for (size_t b = a + 1; b < all.size(); ++b) {
                bool nested = all[a].is_subset_of(all[b]) || all[b].is_subset_of(all[a]);
                bool disjoint = !all[a].intersects(all[b]);
                CHECK((nested || disjoint));
            }
        }
    }
}

TEST_CASE("raising the threshold only shrinks clusters") {
    std::mt19937 rng(71703);
    WeightedGraph g = testutil::random_connected_graph(rng, 6, 5);
    PartitionFunction psp = compute_psp(g);
    std::vector<Rat> probes;
    for (const Rat& c : psp.criticals) {
        probes.push_back(c - 1);
        probes.push_back(c);
    }
    probes.push_back(psp.criticals.back() + 1);
    for (size_t k = 1; k < probes.size(); ++k) {
        for (const auto& fine : clusters_at(psp, probes[k])) {
            bool contained = false;
            for (const auto& coarse : clusters_at(psp, probes[k - 1])) {
                if (fine.is_subset_of(coarse)) contained = true;
            }
            CHECK(contained);
        }
    }
}

TEST_CASE("fundamental partition requires at least one critical value") {
    PartitionFunction empty;
    empty.partitions.push_back(Partition::whole(2));
    CHECK_THROWS_AS(fundamental_partition(empty), InvariantError);
}
