#include "psp/oracle.hpp"

#include "psp/errors.hpp"

#include <algorithm>

namespace psp::oracle {

SetFunction::SetFunction(int ground, std::function<Rat(std::uint32_t)> eval)
    : n_(ground), eval_(std::move(eval)) {
    if (ground <= 0 || ground > kEnumerationLimit) {
        throw InvariantError("set-function ground size outside the enumeration limit");
    }
    memo_.resize(std::size_t{1} << ground);
}

const Rat& SetFunction::operator()(std::uint32_t mask) const {
    if (mask == 0 || mask >= memo_.size()) {
        throw InvariantError("set-function argument outside the domain");
    }
    auto& slot = memo_[mask];
    if (!slot) slot = eval_(mask);
    return *slot;
}

SetFunction incut_function(const Digraph& d) {
    // Copy the arcs so the oracle outlives its source graph.
    int n = d.size();
    std::vector<std::vector<std::pair<int, Rat>>> in_arcs(n);
    for (int v = 0; v < n; ++v) in_arcs[v] = d.in_arcs(v);
    return SetFunction(n, [n, in_arcs = std::move(in_arcs)](std::uint32_t mask) {
        Rat total(0);
        for (int v = 0; v < n; ++v) {
            if (!(mask >> v & 1)) continue;
            for (const auto& [u, c] : in_arcs[v]) {
                if (!(mask >> u & 1)) total += c;
            }
        }
        return total;
    });
}

SetFunction pin_entropy_function(const WeightedGraph& g) {
    auto edges = g.edges();
    return SetFunction(g.size(), [edges = std::move(edges)](std::uint32_t mask) {
        Rat total(0);
        for (const auto& e : edges) {
            if ((mask >> e.u & 1) || (mask >> e.v & 1)) total += e.weight;
        }
        return total;
    });
}

Rat pin_entropy(const WeightedGraph& g, const VertexSet& b) {
    if (b.empty()) throw InvariantError("entropy of the empty set is undefined");
    Rat total(0);
    for (const auto& e : g.edges()) {
        if (b.contains(e.u) || b.contains(e.v)) total += e.weight;
    }
    return total;
}

void for_each_partition(int n, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    if (n <= 0 || n > kEnumerationLimit) {
        throw InvariantError("partition enumeration outside the size limit");
    }
    // Restricted growth string: rgs[0] = 0, rgs[v] <= max(rgs[0..v-1]) + 1.
    std::vector<int> rgs(n, 0);
    std::vector<std::uint32_t> blocks;
    for (;;) {
        int top = 0;
        for (int v = 0; v < n; ++v) top = std::max(top, rgs[v]);
        blocks.assign(top + 1, 0);
        for (int v = 0; v < n; ++v) blocks[rgs[v]] |= std::uint32_t{1} << v;
        fn(blocks);

        int v = n - 1;
        while (v > 0) {
            int cap = 0;
            for (int u = 0; u < v; ++u) cap = std::max(cap, rgs[u]);
            if (rgs[v] <= cap) break;
            --v;
        }
        if (v == 0) return;
        ++rgs[v];
        std::fill(rgs.begin() + v + 1, rgs.end(), 0);
    }
}

Partition partition_from_masks(int n, const std::vector<std::uint32_t>& blocks) {
    std::vector<VertexSet> sets;
    sets.reserve(blocks.size());
    for (std::uint32_t mask : blocks) {
        VertexSet s(n);
        for (int v = 0; v < n; ++v) {
            if (mask >> v & 1) s.insert(v);
        }
        sets.push_back(std::move(s));
    }
    return Partition::from_blocks(n, std::move(sets));
}

Rat partition_cost(const SetFunction& f, const std::vector<std::uint32_t>& blocks,
                   const Rat& gamma) {
    Rat total(0);
    for (std::uint32_t mask : blocks) total += f(mask) - gamma;
    return total;
}

namespace {

// Blockwise common refinement. The optima of the costs used here form a
// lattice whose bottom is this meet, so the meet must itself be optimal;
// callers assert that.
std::vector<std::uint32_t> meet(const std::vector<std::uint32_t>& a,
                                const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t x : a) {
        for (std::uint32_t y : b) {
            if (x & y) out.push_back(x & y);
        }
    }
    return out;
}

struct BestPartitions {
    std::optional<Rat> value;
    std::vector<std::uint32_t> finest;

    void offer(const Rat& cost, const std::vector<std::uint32_t>& blocks) {
        if (!value || cost < *value) {
            value = cost;
            finest = blocks;
        } else if (cost == *value) {
            finest = meet(finest, blocks);
        }
    }
};

} // namespace

std::pair<Rat, Partition> brute_mmi(const WeightedGraph& g) {
    int n = g.size();
    if (n < 2) throw InvariantError("need at least two vertices");
    SetFunction h = pin_entropy_function(g);
    std::uint32_t all = (n == 32) ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
    const Rat& h_total = h(all);

    BestPartitions best;
    for_each_partition(n, [&](const std::vector<std::uint32_t>& blocks) {
        if (blocks.size() < 2) return;
        Rat sum(0);
        for (std::uint32_t mask : blocks) sum += h(mask);
        Rat cost = (sum - h_total) / Rat(static_cast<long>(blocks.size()) - 1);
        best.offer(cost, blocks);
    });

    Rat check(0);
    for (std::uint32_t mask : best.finest) check += h(mask);
    check = (check - h_total) / Rat(static_cast<long>(best.finest.size()) - 1);
    if (check != *best.value) throw InvariantError("common refinement of optima is not optimal");
    return {*best.value, partition_from_masks(n, best.finest)};
}

std::pair<Rat, Partition> brute_dilworth(const SetFunction& f, const Rat& gamma) {
    BestPartitions best;
    for_each_partition(f.ground(), [&](const std::vector<std::uint32_t>& blocks) {
        best.offer(partition_cost(f, blocks, gamma), blocks);
    });
    if (partition_cost(f, best.finest, gamma) != *best.value) {
        throw InvariantError("common refinement of optima is not optimal");
    }
    return {*best.value, partition_from_masks(f.ground(), best.finest)};
}

PartitionFunction brute_psp(const SetFunction& f) {
    int n = f.ground();
    PartitionFunction out;
    std::vector<std::uint32_t> current(1, (n == 32) ? ~std::uint32_t{0}
                                                    : (std::uint32_t{1} << n) - 1);
    out.partitions.push_back(partition_from_masks(n, current));

    // Walk the lower envelope of the lines gamma -> f[P] - |P| gamma, from
    // the single-block line to the all-singletons line.
    while (static_cast<int>(current.size()) < n) {
        Rat f_cur = partition_cost(f, current, Rat(0));
        long k_cur = static_cast<long>(current.size());

        std::optional<Rat> next_gamma;
        for_each_partition(n, [&](const std::vector<std::uint32_t>& blocks) {
            long k = static_cast<long>(blocks.size());
            if (k <= k_cur) return;
            Rat crossing = (partition_cost(f, blocks, Rat(0)) - f_cur) / Rat(k - k_cur);
            if (!next_gamma || crossing < *next_gamma) next_gamma = crossing;
        });
        if (!next_gamma) throw InvariantError("envelope walk found no finer partition");

        Rat target = f_cur - Rat(k_cur) * *next_gamma;
        BestPartitions at_tie;
        for_each_partition(n, [&](const std::vector<std::uint32_t>& blocks) {
            Rat cost = partition_cost(f, blocks, *next_gamma);
            if (cost > target) return;
            if (cost < target) throw InvariantError("envelope predecessor was not optimal");
            at_tie.offer(cost, blocks);
        });
        if (partition_cost(f, at_tie.finest, *next_gamma) != target) {
            throw InvariantError("common refinement of optima is not optimal");
        }

        out.criticals.push_back(*next_gamma);
        current = at_tie.finest;
        out.partitions.push_back(partition_from_masks(n, current));
    }
    return out;
}

std::pair<Rat, VertexSet> brute_min_cut(const flow::FlowNet& net, int s, int t) {
    int n = net.size();
    if (n > kEnumerationLimit + 2) {
        throw InvariantError("cut enumeration outside the size limit");
    }
    if (s == t || s < 0 || t < 0 || s >= n || t >= n) {
        throw InvariantError("cut terminals invalid");
    }

    std::optional<Rat> best;
    std::uint32_t common = 0;
    std::vector<std::uint32_t> optima;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        if (!(mask >> t & 1) || (mask >> s & 1)) continue;
        Rat value(0);
        for (const auto& [key, cap] : net.arcs()) {
            if (!(mask >> key.first & 1) && (mask >> key.second & 1)) value += cap;
        }
        if (!best || value < *best) {
            best = value;
            common = mask;
            optima.assign(1, mask);
        } else if (value == *best) {
            common &= mask;
            optima.push_back(mask);
        }
    }

    Rat check(0);
    for (const auto& [key, cap] : net.arcs()) {
        if (!(common >> key.first & 1) && (common >> key.second & 1)) check += cap;
    }
    if (check != *best) throw InvariantError("intersection of optimal sink sides is not optimal");

    VertexSet side(n);
    for (int v = 0; v < n; ++v) {
        if (common >> v & 1) side.insert(v);
    }
    return {*best, side};
}

} // namespace psp::oracle
