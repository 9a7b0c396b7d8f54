#pragma once

#include "psp/graph.hpp"
#include "psp/parametric.hpp"
#include "psp/pwl.hpp"
#include "psp/rational.hpp"

#include <utility>
#include <vector>

namespace psp {

// Disjoint nonempty blocks covering [0, ground); blocks ordered by their
// smallest member so equal partitions compare equal.
class Partition {
public:
    Partition() = default;

    static Partition whole(int ground);
    static Partition singletons(int ground);
    static Partition from_blocks(int ground, std::vector<VertexSet> blocks);

    int ground_size() const { return ground_; }
    int size() const { return static_cast<int>(blocks_.size()); }
    const std::vector<VertexSet>& blocks() const { return blocks_; }
    const VertexSet& block_containing(int v) const;

    // Every block of *this fits inside one block of coarser.
    bool refines(const Partition& coarser) const;

    bool operator==(const Partition&) const = default;

private:
    int ground_ = 0;
    std::vector<VertexSet> blocks_;
};

// Piecewise-constant partition-valued function of gamma with left-closed
// steps: partitions[0] on (-inf, criticals[0]), partitions[k] on
// [criticals[k-1], criticals[k]), the last partition onward to +inf.
struct PartitionFunction {
    std::vector<Rat> criticals;
    std::vector<Partition> partitions;

    const Partition& at(const Rat& gamma) const;

    bool operator==(const PartitionFunction&) const = default;
};

// Replaces, on every gamma-interval, the blocks meeting the step set with the
// step set itself. Each step set must swallow whole blocks; a partial overlap
// means the solver fed us an inconsistent set and is reported as such.
// The step list's universe is one vertex larger than pf's ground set.
PartitionFunction merge_partition(const PartitionFunction& pf, const BreakpointList& steps);

// Folds the step list of the latest prefix into the dropout thresholds and
// rebuilds the vertex potentials. Entry i of mu/x covers vertex i; the last
// prefix vertex keeps mu = -inf. g_single[i] is the in-weight of vertex i.
void update_dropouts(const BreakpointList& steps, std::span<const Rat> g_single,
                     std::vector<OptGamma>& mu, std::vector<PwlFunction>& x);

struct PspIterationTrace {
    int prefix = 0;
    std::vector<PwlFunction> potentials; // x entering this prefix, one per vertex below the sink
    std::vector<OptGamma> dropouts;      // mu entering this prefix
    ParametricTrace parametric;
    BreakpointList steps;
};

struct PspTrace {
    std::vector<PspIterationTrace> iterations;
};

struct PspOptions {
    int threads = 1;
    bool global_relabel = true;
    SolverStats* stats = nullptr;
    PspTrace* trace = nullptr; // filled only for single-threaded runs
};

// Principal sequence of partitions of the incut function of orient(g):
// the chain from {V} down to singletons with its critical values.
PartitionFunction compute_psp(const WeightedGraph& g, const PspOptions& opts = {});

} // namespace psp
