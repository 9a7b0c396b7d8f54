#pragma once

#include "psp/graph.hpp"
#include "psp/maxflow.hpp"
#include "psp/pwl.hpp"
#include "psp/rational.hpp"

#include <span>
#include <utility>
#include <vector>

namespace psp {

// Parametric min-cut network on the first `prefix` graph vertices plus an
// auxiliary source. Vertex ids: 0..prefix-1 are graph vertices, the sink is
// prefix-1, and source_node() == prefix. Arcs from the source and into the
// sink carry piecewise-linear capacities; arcs between the other vertices keep
// their constant graph capacities.
class ParametricNetwork {
public:
    ParametricNetwork(int prefix, std::vector<PwlFunction> source_cap,
                      std::vector<PwlFunction> sink_cap,
                      std::vector<std::vector<std::pair<int, Rat>>> inner_arcs,
                      std::vector<Rat> in_weight_below, std::vector<Rat> cap_to_sink);

    int prefix() const { return prefix_; }
    int sink() const { return prefix_ - 1; }
    int source_node() const { return prefix_; }

    // Defined for v in 0..prefix-2 (there is no source arc to the sink and no
    // sink arc from itself).
    const PwlFunction& source_cap(int v) const { return source_cap_[v]; }
    const PwlFunction& sink_cap(int v) const { return sink_cap_[v]; }

    // Constant capacities among vertices 0..prefix-2 (heads ordered).
    const std::vector<std::pair<int, Rat>>& inner_arcs(int v) const { return inner_arcs_[v]; }
    Rat inner_cap(int v, int w) const;

    // Original graph quantities used by the critical-range bounds.
    const Rat& in_weight_below(int v) const { return in_weight_below_[v]; }
    const Rat& cap_to_sink(int v) const { return cap_to_sink_[v]; }

    // Capacity of the parametric cut (from, to) as a function of gamma, where
    // both sets live on the ids 0..prefix (source included).
    PwlFunction cut_capacity(const VertexSet& from, const VertexSet& to) const;

private:
    int prefix_;
    std::vector<PwlFunction> source_cap_; // size prefix-1
    std::vector<PwlFunction> sink_cap_;   // size prefix-1
    std::vector<std::vector<std::pair<int, Rat>>> inner_arcs_;
    std::vector<Rat> in_weight_below_;
    std::vector<Rat> cap_to_sink_;
};

// Assembles the network for the given prefix size from the oriented graph and
// the per-vertex potentials (one for each vertex in 0..prefix-2):
//   source cap  = max{0, -potential}          (non-decreasing in gamma)
//   sink cap    = max{0, potential} + c(v, sink)  (non-increasing in gamma)
ParametricNetwork build_parametric_network(const Digraph& d, int prefix,
                                           std::span<const PwlFunction> potentials);

// Above this threshold the minimal minimizer stays {sink}: the largest, over
// v < sink, of (weight entering v from below) + (weight leaving v within the
// prefix).
Rat gamma_upper_bound(const ParametricNetwork& pn);

// Below this threshold the minimizer keeps every vertex: the smallest, over
// v < sink, of max{dropout[v], c(v, sink)}.
Rat gamma_lower_bound(const ParametricNetwork& pn, std::span<const OptGamma> dropout);

// One step of the piecewise-constant minimal minimizer: it equals `members`
// on [gamma, next step). members always contains the sink.
struct Breakpoint {
    Rat gamma;
    VertexSet members;
};
// Strictly increasing gammas, strictly shrinking nested members, last == {sink};
// the implicit step before the first entry is the full prefix.
using BreakpointList = std::vector<Breakpoint>;

// Concrete max-flow instance obtained by evaluating the parametric capacities
// at a fixed gamma and contracting `source_side` / `sink_side` into single
// terminals. ids maps net vertices back to parametric ids.
struct ContractedNetwork {
    flow::FlowNet net;
    flow::FlowState warm;
    std::vector<int> ids;
    int source = 0;
    int sink = 0;
};

// source_side must contain the source node, sink_side the sink; they must be
// disjoint (InvariantError otherwise). Flows in `carried` are interpreted on
// parametric ids; flows into merged terminals are summed and clipped to the
// new capacities, and anything left invalid is the caller's concern
// (max_flow's non-strict validation falls back to the zero flow).
ContractedNetwork contract_network(const ParametricNetwork& pn, const Rat& gamma,
                                   const VertexSet& source_side, const VertexSet& sink_side,
                                   const flow::FlowState& carried);

// Observability hook for tests: records the probed gammas in processing order
// and the (lo, hi) interval of every task taken off the work list.
struct ParametricTrace {
    Rat gamma_lo;
    Rat gamma_hi;
    bool trivial_range = false; // gamma_lo == gamma_hi shortcut taken
    Rat initial_cut_value;
    VertexSet initial_sink_side; // parametric ids, sink included
    std::vector<Rat> crossings;
    std::vector<std::pair<Rat, Rat>> task_intervals;
};

struct ParametricOptions {
    int threads = 1; // > 1 solves independent gamma slices concurrently
    SolverStats* stats = nullptr;
    ParametricTrace* trace = nullptr; // honored only when threads == 1
    bool global_relabel = true;
};

// Full breakpoint scan of the minimal minimizer over gamma, by recursive
// interval splitting: each probe solves one max-flow at the crossing of the
// already-settled boundary cuts, warm-started from the enclosing interval's
// flow. Work-list order is LIFO with the left slice on top.
BreakpointList parametric_min_cut(const ParametricNetwork& pn, std::span<const OptGamma> dropout,
                                  const ParametricOptions& opts = {});

} // namespace psp
