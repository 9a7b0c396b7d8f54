#include "psp/clustering.hpp"

#include "psp/errors.hpp"

namespace psp {

namespace {

std::vector<VertexSet> non_singletons(const Partition& p) {
    std::vector<VertexSet> out;
    for (const auto& block : p.blocks()) {
        if (block.size() > 1) out.push_back(block);
    }
    return out;
}

} // namespace

std::vector<VertexSet> clusters_at(const PartitionFunction& psp, const Rat& gamma) {
    return non_singletons(psp.at(gamma));
}

std::pair<Rat, Partition> fundamental_partition(const PartitionFunction& psp) {
    if (psp.criticals.empty()) {
        throw InvariantError("partition function has no critical value");
    }
    return {psp.criticals.front(), psp.partitions[1]};
}

Rat mmi(const WeightedGraph& g, const PspOptions& opts) {
    return compute_psp(g, opts).criticals.front();
}

std::vector<HierarchyRow> hierarchy(const PartitionFunction& psp) {
    std::vector<HierarchyRow> rows;
    rows.reserve(psp.partitions.size());
    for (size_t k = 0; k < psp.partitions.size(); ++k) {
        HierarchyRow row;
        row.lo = (k == 0) ? OptGamma{} : OptGamma{psp.criticals[k - 1]};
        row.hi = (k == psp.criticals.size()) ? OptGamma{} : OptGamma{psp.criticals[k]};
        row.partition = psp.partitions[k];
        row.clusters = non_singletons(psp.partitions[k]);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace psp
