#pragma once

#include "psp/clustering.hpp"
#include "psp/graph.hpp"
#include "psp/maxflow.hpp"
#include "psp/psp.hpp"

#include <string>
#include <vector>

// Text renderers for the command-line surface. Every function is a pure
// formatter over already-computed results; output is byte-stable for a given
// input so runs can be diffed.
namespace psp::report {

// One row per gamma-interval: "<gamma>\t<partition>", where the first row
// carries "-inf" and a partition prints as "{1,3}|{2}" in original labels.
std::string render_tsv(const WeightedGraph& g, const PartitionFunction& psp);

// Object with "critical_values" (rational strings), "partitions" (label
// lists per block per interval), and "clusters_by_interval".
std::string render_json(const WeightedGraph& g, const PartitionFunction& psp);

// DOT digraph of the cluster-nesting tree; edges are labeled with the
// critical value at which the parent splits.
std::string render_dot(const WeightedGraph& g, const PartitionFunction& psp);

// One cluster per line.
std::string render_clusters(const WeightedGraph& g, const std::vector<VertexSet>& clusters);

std::string render_mmi(const WeightedGraph& g, const Rat& value, const Partition& fundamental);

// Instance shape plus solver counters; not part of the deterministic output.
std::string render_stats(const WeightedGraph& g, const SolverStats& stats, double wall_ms);

} // namespace psp::report
