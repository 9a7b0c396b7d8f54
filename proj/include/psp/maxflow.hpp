#pragma once

#include "psp/graph.hpp"
#include "psp/rational.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace psp {

// Counters shared across solver layers. Atomic so concurrent slice solving can
// bump them without synchronization.
struct SolverStats {
    std::atomic<std::uint64_t> maxflow_calls{0};
    std::atomic<std::uint64_t> pushes{0};
    std::atomic<std::uint64_t> relabels{0};
    std::atomic<std::uint64_t> global_relabels{0};
    std::atomic<std::uint64_t> warm_start_fallbacks{0};
    std::atomic<std::uint64_t> breakpoints{0};
};

namespace flow {

// Directed capacity map on vertices 0..n-1. At most one entry per ordered
// pair; duplicate insertions merge by summing.
class FlowNet {
public:
    FlowNet() = default;
    explicit FlowNet(int n) : n_(n) {}

    int size() const { return n_; }

    // Ignores non-positive capacities. from != to required.
    void add_arc(int from, int to, const Rat& cap);
    Rat capacity(int from, int to) const;
    const std::map<std::pair<int, int>, Rat>& arcs() const { return arcs_; }

private:
    int n_ = 0;
    std::map<std::pair<int, int>, Rat> arcs_;
};

// Flow values with explicit anti-symmetry: set_flow(v, w, x) records both
// f(v,w) = x and f(w,v) = -x. excess/label are filled by the solver on return;
// they are advisory on input (warm starts recompute both).
class FlowState {
public:
    FlowState() = default;
    explicit FlowState(int n) : n_(n) {}

    int size() const { return n_; }
    bool empty() const { return entries_.empty(); }

    Rat flow(int v, int w) const;
    void set_flow(int v, int w, const Rat& value);
    // Writes a single orientation without the mirrored entry. Only for tests
    // that need to construct anti-symmetry violations.
    void set_flow_raw(int v, int w, const Rat& value);

    const std::map<std::pair<int, int>, Rat>& entries() const { return entries_; }

    std::vector<Rat> excess;
    std::vector<int> label;

private:
    int n_ = 0;
    std::map<std::pair<int, int>, Rat> entries_;
};

struct CutResult {
    Rat value;            // max-flow value == min-cut capacity
    VertexSet sink_side;  // inclusion-wise minimal min-cut side containing the sink
    FlowState flow;       // a maximum flow (zero excess off source/sink)
};

struct MaxFlowOptions {
    // With strict_warm_start an invalid warm start throws InvariantError;
    // otherwise it falls back to the zero flow (warm starts are a speed
    // optimization, never a correctness requirement).
    bool strict_warm_start = true;
    bool global_relabel = true;
    SolverStats* stats = nullptr;
};

// Push-relabel with highest-level selection and the gap heuristic; optional
// periodic global relabeling. Warm start resumes from a valid preflow. The
// returned sink_side is the set of vertices that reach the sink in the final
// residual graph, which is the unique inclusion-wise minimal min-cut side.
CutResult max_flow(const FlowNet& net, int source, int sink,
                   const FlowState* warm_start = nullptr, const MaxFlowOptions& opts = {});

// nullopt when f is a valid preflow for net: anti-symmetric, capacity
// respecting, and with non-negative computed excess everywhere but the source.
// Otherwise a description of the first violation found.
std::optional<std::string> validate_preflow(const FlowNet& net, int source, const FlowState& f);

} // namespace flow
} // namespace psp
