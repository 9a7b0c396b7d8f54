#pragma once

#include "psp/psp.hpp"

#include <utility>
#include <vector>

namespace psp {

// Non-singleton blocks of the partition in effect at gamma, in block order.
std::vector<VertexSet> clusters_at(const PartitionFunction& psp, const Rat& gamma);

// First critical value and the partition just past it. The value is the
// multivariate mutual information of the whole vertex set.
std::pair<Rat, Partition> fundamental_partition(const PartitionFunction& psp);

Rat mmi(const WeightedGraph& g, const PspOptions& opts = {});

// One row per gamma-interval; nullopt ends stand for -inf / +inf.
struct HierarchyRow {
    OptGamma lo, hi;
    Partition partition;
    std::vector<VertexSet> clusters;
};

std::vector<HierarchyRow> hierarchy(const PartitionFunction& psp);

} // namespace psp
