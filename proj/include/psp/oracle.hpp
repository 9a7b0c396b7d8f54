#pragma once

#include "psp/graph.hpp"
#include "psp/maxflow.hpp"
#include "psp/psp.hpp"
#include "psp/rational.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

// Exhaustive reference implementations. Everything here enumerates subsets
// or partitions outright and is deliberately independent of the flow-based
// solver; the size limit keeps runs in the seconds range.
namespace psp::oracle {

inline constexpr int kEnumerationLimit = 10;

// Rational set function over subsets of [0, ground), addressed by bitmask.
// Evaluations are memoized; the empty set is outside the domain.
class SetFunction {
public:
    SetFunction(int ground, std::function<Rat(std::uint32_t)> eval);

    int ground() const { return n_; }
    const Rat& operator()(std::uint32_t mask) const;

private:
    int n_;
    std::function<Rat(std::uint32_t)> eval_;
    mutable std::vector<std::optional<Rat>> memo_;
};

SetFunction incut_function(const Digraph& d);
SetFunction pin_entropy_function(const WeightedGraph& g);

// Total weight of edges with at least one endpoint in b.
Rat pin_entropy(const WeightedGraph& g, const VertexSet& b);

// Visits every partition of [0, n) once, as a list of block masks ordered by
// smallest member. Restricted-growth-string enumeration.
void for_each_partition(int n, const std::function<void(const std::vector<std::uint32_t>&)>& fn);

Partition partition_from_masks(int n, const std::vector<std::uint32_t>& blocks);

// Sum over blocks of f(C) - gamma.
Rat partition_cost(const SetFunction& f, const std::vector<std::uint32_t>& blocks,
                   const Rat& gamma);

// Minimum over partitions with >= 2 blocks of the normalized entropy gap
// (sum of block entropies minus the total) / (blocks - 1), with the finest
// optimal partition.
std::pair<Rat, Partition> brute_mmi(const WeightedGraph& g);

// Minimum of partition_cost over all partitions, with the finest optimum.
std::pair<Rat, Partition> brute_dilworth(const SetFunction& f, const Rat& gamma);

// Lower envelope of the per-partition cost lines over gamma: critical values
// and the finest optimal partition on each segment.
PartitionFunction brute_psp(const SetFunction& f);

// Minimum cut separating s from t by sink-side enumeration; returns the
// value and the inclusion-minimal optimal sink side.
std::pair<Rat, VertexSet> brute_min_cut(const flow::FlowNet& net, int s, int t);

} // namespace psp::oracle
