#include "psp/psp.hpp"

#include "psp/errors.hpp"

#include <algorithm>
#include <map>

namespace psp {

Partition Partition::whole(int ground) {
    return from_blocks(ground, {VertexSet::full(ground)});
}

Partition Partition::singletons(int ground) {
    std::vector<VertexSet> blocks;
    blocks.reserve(ground);
    for (int v = 0; v < ground; ++v) blocks.push_back(VertexSet::of(ground, {v}));
    return from_blocks(ground, std::move(blocks));
}

Partition Partition::from_blocks(int ground, std::vector<VertexSet> blocks) {
    if (ground <= 0) throw InvariantError("partition needs a nonempty ground set");
    std::vector<int> owner(ground, -1);
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].universe() != ground) {
            throw InvariantError("partition block universe differs from the ground set");
        }
        if (blocks[b].empty()) throw InvariantError("partition block is empty");
        for (int v : blocks[b].elements()) {
            if (owner[v] >= 0) throw InvariantError("partition blocks overlap");
            owner[v] = static_cast<int>(b);
        }
    }
    for (int v = 0; v < ground; ++v) {
        if (owner[v] < 0) throw InvariantError("partition misses a vertex");
    }
    std::sort(blocks.begin(), blocks.end(), [](const VertexSet& a, const VertexSet& b) {
        return a.elements().front() < b.elements().front();
    });
    Partition p;
    p.ground_ = ground;
    p.blocks_ = std::move(blocks);
    return p;
}

const VertexSet& Partition::block_containing(int v) const {
    for (const auto& b : blocks_) {
        if (b.contains(v)) return b;
    }
    throw InvariantError("vertex outside the partition's ground set");
}

bool Partition::refines(const Partition& coarser) const {
    if (ground_ != coarser.ground_) return false;
    std::vector<int> owner(ground_, -1);
    for (size_t b = 0; b < coarser.blocks_.size(); ++b) {
        for (int v : coarser.blocks_[b].elements()) owner[v] = static_cast<int>(b);
    }
    for (const auto& block : blocks_) {
        auto members = block.elements();
        for (size_t k = 1; k < members.size(); ++k) {
            if (owner[members[k]] != owner[members[0]]) return false;
        }
    }
    return true;
}

const Partition& PartitionFunction::at(const Rat& gamma) const {
    size_t idx = std::upper_bound(criticals.begin(), criticals.end(), gamma) - criticals.begin();
    return partitions[idx];
}

namespace {

// Step set in effect at gamma: the full prefix before the first recorded
// step, then each recorded set from its gamma onward (left-closed).
const VertexSet* step_at(const BreakpointList& steps, const Rat& gamma, const VertexSet& before) {
    const VertexSet* current = &before;
    for (const auto& step : steps) {
        if (step.gamma > gamma) break;
        current = &step.members;
    }
    return current;
}

VertexSet widen(const VertexSet& s, int universe) {
    VertexSet out(universe);
    for (int v : s.elements()) out.insert(v);
    return out;
}

// Persistent ties can leave a recorded minimizer cutting through a block of
// the current partition: a strict subset of a block stays tight whenever a
// previously absorbed vertex keeps a breakpoint-free potential. Absorbing
// every touched block preserves optimality (the objective is submodular and
// the potentials are tight on whole blocks), and the absorbed set is the
// partition block the new vertex joins. Close each step on every interval of
// the common refinement of the two breakpoint sets; a partition critical that
// falls inside a step interval becomes a new step of its own.
BreakpointList close_steps(const PartitionFunction& pf, const BreakpointList& steps, int prefix) {
    VertexSet before = VertexSet::full(prefix);

    std::vector<Rat> cuts;
    cuts.reserve(pf.criticals.size() + steps.size());
    cuts.insert(cuts.end(), pf.criticals.begin(), pf.criticals.end());
    for (const auto& step : steps) cuts.push_back(step.gamma);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    BreakpointList out;
    const VertexSet* prev = &before;
    for (const Rat& probe : cuts) {
        const VertexSet& grab = *step_at(steps, probe, before);
        VertexSet closed = widen(grab, prefix);
        for (const auto& block : pf.at(probe).blocks()) {
            if (grab.intersects(block)) {
                for (int v : block.elements()) closed.insert(v);
            }
        }
        if (closed == *prev) continue;
        if (!closed.is_subset_of(*prev)) {
            throw InvariantError("closed step sets stopped nesting");
        }
        out.push_back({probe, std::move(closed)});
        prev = &out.back().members;
    }
    if (out.empty() || out.back().members.size() != 1) {
        throw InvariantError("closed step sets never shrink to the new vertex");
    }
    return out;
}

} // namespace

PartitionFunction merge_partition(const PartitionFunction& pf, const BreakpointList& steps) {
    if (steps.empty()) throw InvariantError("merge needs a nonempty step list");
    if (pf.partitions.empty()) throw InvariantError("merge needs a nonempty partition function");
    int prefix = steps.front().members.universe();
    if (pf.partitions.front().ground_size() != prefix - 1) {
        throw InvariantError("step universe must extend the partition ground set by one vertex");
    }
    VertexSet before = VertexSet::full(prefix);

    std::vector<Rat> cuts;
    cuts.reserve(pf.criticals.size() + steps.size());
    cuts.insert(cuts.end(), pf.criticals.begin(), pf.criticals.end());
    for (const auto& step : steps) cuts.push_back(step.gamma);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    PartitionFunction out;
    for (size_t k = 0; k <= cuts.size(); ++k) {
        Rat probe = (k == 0) ? cuts.front() - 1 : cuts[k - 1];
        const Partition& base = pf.at(probe);
        const VertexSet& grab = *step_at(steps, probe, before);

        std::vector<VertexSet> blocks;
        for (const auto& block : base.blocks()) {
            if (!grab.intersects(block)) {
                blocks.push_back(widen(block, prefix));
            } else if (!widen(block, prefix).is_subset_of(grab)) {
                throw InvariantError("step set splits an existing block");
            }
        }
        blocks.push_back(grab);
        Partition merged = Partition::from_blocks(prefix, std::move(blocks));

        if (!out.partitions.empty() && merged == out.partitions.back()) continue;
        if (k > 0) out.criticals.push_back(cuts[k - 1]);
        out.partitions.push_back(std::move(merged));
    }

    for (size_t k = 1; k < out.partitions.size(); ++k) {
        if (!out.partitions[k].refines(out.partitions[k - 1]) ||
            out.partitions[k].size() <= out.partitions[k - 1].size()) {
            throw InvariantError("merged partitions stopped refining");
        }
    }
    return out;
}

void update_dropouts(const BreakpointList& steps, std::span<const Rat> g_single,
                     std::vector<OptGamma>& mu, std::vector<PwlFunction>& x) {
    if (steps.empty()) throw InvariantError("dropout update needs a nonempty step list");
    int prefix = steps.front().members.universe();
    if (g_single.size() < static_cast<size_t>(prefix) ||
        mu.size() < static_cast<size_t>(prefix) - 1 || x.size() < static_cast<size_t>(prefix) - 1) {
        throw InvariantError("dropout update arrays shorter than the prefix");
    }
    for (int i = 0; i < prefix - 1; ++i) {
        const Rat* dropped = nullptr;
        for (const auto& step : steps) {
            if (!step.members.contains(i)) {
                dropped = &step.gamma;
                break;
            }
        }
        if (!dropped) throw InvariantError("vertex never leaves the step sets");
        if (!mu[i] || *mu[i] < *dropped) mu[i] = *dropped;
        x[i] = vertex_potential(g_single[i], mu[i]);
    }
}

PartitionFunction compute_psp(const WeightedGraph& g, const PspOptions& opts) {
    int n = g.size();
    if (n < 2) throw InvariantError("need at least two vertices");
    Digraph d = orient(g);

    std::vector<Rat> g_single;
    g_single.reserve(n);
    for (int v = 0; v < n; ++v) {
        g_single.push_back(incut(d, VertexSet::of(n, {v})));
    }

    std::vector<OptGamma> mu(n, std::nullopt);
    std::vector<PwlFunction> x;
    x.reserve(n);
    x.push_back(vertex_potential(g_single[0], std::nullopt));

    PartitionFunction pf;
    pf.partitions.push_back(Partition::whole(1));

    for (int prefix = 2; prefix <= n; ++prefix) {
        ParametricNetwork pn =
            build_parametric_network(d, prefix, std::span<const PwlFunction>(x));

        PspIterationTrace iter;
        if (opts.trace) {
            iter.potentials.assign(x.begin(), x.begin() + (prefix - 1));
            iter.dropouts.assign(mu.begin(), mu.begin() + (prefix - 1));
        }
        ParametricOptions popts;
        popts.threads = opts.threads;
        popts.global_relabel = opts.global_relabel;
        popts.stats = opts.stats;
        if (opts.trace && opts.threads <= 1) popts.trace = &iter.parametric;

        BreakpointList steps =
            parametric_min_cut(pn, std::span<const OptGamma>(mu.data(), prefix - 1), popts);
        steps = close_steps(pf, steps, prefix);

        pf = merge_partition(pf, steps);

        if (prefix < n) {
            update_dropouts(steps, g_single, mu, x);
            x.push_back(vertex_potential(g_single[prefix - 1], std::nullopt));
        }

        if (opts.trace) {
            iter.prefix = prefix;
            iter.steps = std::move(steps);
            opts.trace->iterations.push_back(std::move(iter));
        }
    }

    if (pf.partitions.front() != Partition::whole(n) ||
        pf.partitions.back() != Partition::singletons(n) ||
        pf.criticals.size() > static_cast<size_t>(n) - 1) {
        throw InvariantError("partition sequence missed its endpoints");
    }
    return pf;
}

} // namespace psp
