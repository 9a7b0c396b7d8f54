#include "psp/errors.hpp"
#include "psp/oracle.hpp"
#include "psp/psp.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

using namespace psp;

namespace {

BreakpointList make_steps(int universe, std::vector<std::pair<Rat, std::vector<int>>> raw) {
    BreakpointList out;
    for (auto& [gamma, members] : raw) {
        VertexSet s(universe);
        for (int v : members) s.insert(v);
        out.push_back({gamma, std::move(s)});
    }
    return out;
}

std::uint32_t to_mask(const VertexSet& s) {
    std::uint32_t mask = 0;
    for (int v : s.elements()) mask |= 1u << v;
    return mask;
}

// Blocks as sorted label lists, sorted among themselves; permutation-friendly.
std::vector<std::vector<int>> canon(const Partition& p, const std::vector<int>& relabel = {}) {
    std::vector<std::vector<int>> out;
    for (const auto& block : p.blocks()) {
        std::vector<int> members;
        for (int v : block.elements()) {
            members.push_back(relabel.empty() ? v : relabel[v]);
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("merging a two-vertex step list splits at its breakpoint") {
    PartitionFunction pf;
    pf.partitions.push_back(Partition::whole(1));

    PartitionFunction merged = merge_partition(pf, make_steps(2, {{Rat(1), {1}}}));
    REQUIRE(merged.criticals.size() == 1);
    CHECK(merged.criticals[0] == 1);
    CHECK(merged.partitions[0] == Partition::whole(2));
    CHECK(merged.partitions[1] == Partition::singletons(2));
    CHECK(merged.at(Rat(0)) == Partition::whole(2));
    CHECK(merged.at(Rat(1)) == Partition::singletons(2));

    SUBCASE("a second merge interleaves both breakpoint sets") {
        PartitionFunction full =
            merge_partition(merged, make_steps(3, {{Rat(2), {0, 2}}, {Rat(5), {2}}}));
        REQUIRE(full.criticals == std::vector<Rat>{Rat(2), Rat(5)});
        CHECK(full.partitions[0] == Partition::whole(3));
        CHECK(full.partitions[1] ==
              Partition::from_blocks(3, {VertexSet::of(3, {0, 2}), VertexSet::of(3, {1})}));
        CHECK(full.partitions[2] == Partition::singletons(3));
    }
}

TEST_CASE("merging a constant singleton list appends the new vertex everywhere") {
    PartitionFunction pf;
    pf.criticals = {Rat(4)};
    pf.partitions = {Partition::whole(2), Partition::singletons(2)};

    PartitionFunction merged = merge_partition(pf, make_steps(3, {{Rat(0), {2}}}));
    REQUIRE(merged.criticals == std::vector<Rat>{Rat(0), Rat(4)});
    CHECK(merged.partitions[0] == Partition::whole(3));
    CHECK(merged.partitions[1] ==
          Partition::from_blocks(3, {VertexSet::of(3, {0, 1}), VertexSet::of(3, {2})}));
    CHECK(merged.partitions[2] == Partition::singletons(3));
}

TEST_CASE("merge rejects a step set that cuts through a block") {
    PartitionFunction pf;
    pf.partitions.push_back(Partition::whole(2));
    CHECK_THROWS_AS(merge_partition(pf, make_steps(3, {{Rat(1), {1, 2}}, {Rat(3), {2}}})),
                    InvariantError);
}

TEST_CASE("merge folds equal adjacent partitions into one interval") {
    PartitionFunction pf;
    pf.criticals = {Rat(3)};
    pf.partitions = {Partition::whole(2), Partition::singletons(2)};

    // The step list also breaks at 3, so the refinement probes 3 twice over.
    PartitionFunction merged =
        merge_partition(pf, make_steps(3, {{Rat(3), {2}}}));
    REQUIRE(merged.criticals == std::vector<Rat>{Rat(3)});
    CHECK(merged.partitions[1] == Partition::singletons(3));
}

TEST_CASE("dropout update freezes the departing vertex's potential") {
    std::vector<Rat> g_single = {Rat(0), Rat(1)};
    std::vector<OptGamma> mu(2, std::nullopt);
    std::vector<PwlFunction> x = {vertex_potential(g_single[0], std::nullopt)};

    update_dropouts(make_steps(2, {{Rat(1), {1}}}), g_single, mu, x);
    REQUIRE(mu[0].has_value());
    CHECK(*mu[0] == 1);
    CHECK(x[0](Rat(0)) == -1);
    CHECK(x[0](Rat(1)) == -1);
    CHECK(x[0](Rat(4)) == -4);

    SUBCASE("a later, lower dropout cannot lower the frozen value") {
        update_dropouts(make_steps(2, {{Rat(1) / 2, {1}}}), g_single, mu, x);
        CHECK(*mu[0] == 1);
    }
    SUBCASE("a later, higher dropout raises it") {
        update_dropouts(make_steps(2, {{Rat(7), {1}}}), g_single, mu, x);
        CHECK(*mu[0] == 7);
        CHECK(x[0](Rat(4)) == -7);
    }
}

TEST_CASE("dropout update rejects a vertex that never leaves") {
    std::vector<Rat> g_single = {Rat(0), Rat(2), Rat(3)};
    std::vector<OptGamma> mu(3, std::nullopt);
    std::vector<PwlFunction> x = {vertex_potential(g_single[0], std::nullopt),
                                  vertex_potential(g_single[1], std::nullopt)};
    CHECK_THROWS_AS(update_dropouts(make_steps(3, {{Rat(2), {0, 2}}}), g_single, mu, x),
                    InvariantError);
}

TEST_CASE("triangle psp: two critical values") {
    PartitionFunction psp = compute_psp(testutil::triangle());
    REQUIRE(psp.criticals == std::vector<Rat>{Rat(2), Rat(5)});
    CHECK(psp.partitions[0] == Partition::whole(3));
    CHECK(psp.partitions[1] ==
          Partition::from_blocks(3, {VertexSet::of(3, {0, 2}), VertexSet::of(3, {1})}));
    CHECK(psp.partitions[2] == Partition::singletons(3));
    CHECK(psp.at(Rat(2)) == psp.partitions[1]); // intervals are left-closed
}

TEST_CASE("two-vertex psp breaks exactly at the edge weight") {
    WeightedGraph g = WeightedGraph::from_edges(2, {{0, 1, Rat(7)}});
    PartitionFunction psp = compute_psp(g);
    REQUIRE(psp.criticals == std::vector<Rat>{Rat(7)});
    CHECK(psp.partitions[0] == Partition::whole(2));
    CHECK(psp.partitions[1] == Partition::singletons(2));
}

TEST_CASE("disconnected graph splits into components at gamma zero") {
    PartitionFunction psp = compute_psp(testutil::two_components());
    REQUIRE(psp.criticals == std::vector<Rat>{Rat(0), Rat(4), Rat(9)});
    CHECK(psp.partitions[0] == Partition::whole(4));
    CHECK(psp.partitions[1] ==
          Partition::from_blocks(4, {VertexSet::of(4, {0, 1}), VertexSet::of(4, {2, 3})}));
    CHECK(psp.partitions[2] ==
          Partition::from_blocks(4, {VertexSet::of(4, {0}), VertexSet::of(4, {1}),
                                     VertexSet::of(4, {2, 3})}));
    CHECK(psp.partitions[3] == Partition::singletons(4));
}

TEST_CASE("random instances agree with the enumeration oracle") {
    std::mt19937 rng(61601);
    for (int round = 0; round < 120; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 7));
        CAPTURE(round);
        PartitionFunction got = compute_psp(g);
        PartitionFunction want = oracle::brute_psp(oracle::incut_function(orient(g)));
        REQUIRE(got.criticals == want.criticals);
        REQUIRE(got.partitions.size() == want.partitions.size());
        for (size_t k = 0; k < got.partitions.size(); ++k) {
            CHECK(got.partitions[k] == want.partitions[k]);
        }
    }
}

TEST_CASE("reported partitions minimize the partition cost exactly") {
    std::mt19937 rng(61602);
    for (int round = 0; round < 25; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 6));
        PartitionFunction psp = compute_psp(g);
        oracle::SetFunction f = oracle::incut_function(orient(g));

        std::vector<Rat> probes;
        for (size_t k = 0; k < psp.criticals.size(); ++k) {
            probes.push_back(psp.criticals[k]);
            if (k + 1 < psp.criticals.size()) {
                probes.push_back((psp.criticals[k] + psp.criticals[k + 1]) / 2);
            }
        }
        for (const Rat& gamma : probes) {
            auto [best, finest] = oracle::brute_dilworth(f, gamma);
            const Partition& reported = psp.at(gamma);
            Rat cost(0);
            for (const auto& block : reported.blocks()) cost += f(to_mask(block)) - gamma;
            CAPTURE(round);
            CHECK(cost == best);
            CHECK(reported == finest);
        }
    }
}

TEST_CASE("relabeling the vertices permutes the clusters but not the thresholds") {
    std::mt19937 rng(61603);
    for (int round = 0; round < 50; ++round) {
        int n = 3 + static_cast<int>(rng() % 4);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 6));

        std::vector<int> perm(n);
        for (int v = 0; v < n; ++v) perm[v] = v;
        std::shuffle(perm.begin(), perm.end(), rng);

        std::vector<WeightedEdge> edges;
        for (const auto& e : g.edges()) {
            int a = perm[e.u];
            int b = perm[e.v];
            edges.push_back({std::min(a, b), std::max(a, b), e.weight});
        }
        WeightedGraph h = WeightedGraph::from_edges(n, std::move(edges));

        PartitionFunction pg = compute_psp(g);
        PartitionFunction ph = compute_psp(h);
        CAPTURE(round);
        REQUIRE(pg.criticals == ph.criticals);
        REQUIRE(pg.partitions.size() == ph.partitions.size());
        for (size_t k = 0; k < pg.partitions.size(); ++k) {
            CHECK(canon(pg.partitions[k], perm) == canon(ph.partitions[k]));
        }
    }
}

TEST_CASE("entropy and incut costs differ by a constant at every partition") {
    std::mt19937 rng(61604);
    WeightedGraph g = testutil::random_connected_graph(rng, 5, 4);
    oracle::SetFunction gcut = oracle::incut_function(orient(g));
    oracle::SetFunction h = oracle::pin_entropy_function(g);
    Rat total = g.total_weight();

    oracle::for_each_partition(5, [&](const std::vector<std::uint32_t>& blocks) {
        Rat gcost(0), hcost(0);
        for (std::uint32_t mask : blocks) {
            gcost += gcut(mask);
            hcost += h(mask);
        }
        CHECK(hcost - gcost == total);
    });

    // Same offset at every partition, so both functions share one psp.
    PartitionFunction a = oracle::brute_psp(gcut);
    PartitionFunction b = oracle::brute_psp(h);
    CHECK(a.criticals == b.criticals);
    REQUIRE(a.partitions.size() == b.partitions.size());
    for (size_t k = 0; k < a.partitions.size(); ++k) CHECK(a.partitions[k] == b.partitions[k]);
}

TEST_CASE("worker pool output matches the sequential run") {
    std::mt19937 rng(61605);
    for (int round = 0; round < 20; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 7));
        PartitionFunction seq = compute_psp(g);
        PspOptions opts;
        opts.threads = 4;
        PartitionFunction par = compute_psp(g, opts);
        CAPTURE(round);
        REQUIRE(seq.criticals == par.criticals);
        REQUIRE(seq.partitions.size() == par.partitions.size());
        for (size_t k = 0; k < seq.partitions.size(); ++k) {
            CHECK(seq.partitions[k] == par.partitions[k]);
        }
    }
}

TEST_CASE("chain shape: strictly refining, endpoints pinned, at most n levels") {
    std::mt19937 rng(61606);
    for (int round = 0; round < 30; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        WeightedGraph g =
            testutil::random_connected_graph(rng, n, static_cast<int>(rng() % 7));
        PartitionFunction psp = compute_psp(g);
        REQUIRE(psp.partitions.size() == psp.criticals.size() + 1);
        CHECK(psp.partitions.size() <= static_cast<size_t>(n));
        CHECK(psp.partitions.front() == Partition::whole(n));
        CHECK(psp.partitions.back() == Partition::singletons(n));
        CHECK(std::is_sorted(psp.criticals.begin(), psp.criticals.end()));
        for (size_t k = 1; k < psp.criticals.size(); ++k) {
            CHECK(psp.criticals[k - 1] < psp.criticals[k]);
        }
        for (size_t k = 1; k < psp.partitions.size(); ++k) {
            CHECK(psp.partitions[k].refines(psp.partitions[k - 1]));
            CHECK(psp.partitions[k].size() > psp.partitions[k - 1].size());
        }
    }
}
