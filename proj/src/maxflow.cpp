#include "psp/maxflow.hpp"

#include "psp/errors.hpp"

#include <algorithm>
#include <deque>

namespace psp::flow {

void FlowNet::add_arc(int from, int to, const Rat& cap) {
    if (from == to) throw InvariantError("self-arc in flow network");
    if (from < 0 || from >= n_ || to < 0 || to >= n_) {
        throw InvariantError("arc endpoint out of range");
    }
    if (cap <= 0) return;
    arcs_[{from, to}] += cap;
}

Rat FlowNet::capacity(int from, int to) const {
    auto it = arcs_.find({from, to});
    return it == arcs_.end() ? Rat(0) : it->second;
}

Rat FlowState::flow(int v, int w) const {
    auto it = entries_.find({v, w});
    return it == entries_.end() ? Rat(0) : it->second;
}

void FlowState::set_flow(int v, int w, const Rat& value) {
    if (value == 0) {
        entries_.erase({v, w});
        entries_.erase({w, v});
        return;
    }
    entries_[{v, w}] = value;
    entries_[{w, v}] = -value;
}

void FlowState::set_flow_raw(int v, int w, const Rat& value) {
    entries_[{v, w}] = value;
}

std::optional<std::string> validate_preflow(const FlowNet& net, int source, const FlowState& f) {
    int n = net.size();
    std::vector<Rat> excess(n, Rat(0));
    for (const auto& [key, val] : f.entries()) {
        auto [v, w] = key;
        if (v < 0 || v >= n || w < 0 || w >= n || v == w) {
            return "flow entry (" + std::to_string(v) + "," + std::to_string(w) +
                   ") is not a valid vertex pair";
        }
        if (f.flow(w, v) != -val) {
            return "anti-symmetry broken on (" + std::to_string(v) + "," + std::to_string(w) +
                   "): f=" + format_rational(val) + " but f(" + std::to_string(w) + "," +
                   std::to_string(v) + ")=" + format_rational(f.flow(w, v));
        }
        if (val > net.capacity(v, w)) {
            return "capacity exceeded on (" + std::to_string(v) + "," + std::to_string(w) +
                   "): f=" + format_rational(val) +
                   " cap=" + format_rational(net.capacity(v, w));
        }
        excess[w] += val; // each signed entry contributes its inflow to the head
    }
    for (int v = 0; v < n; ++v) {
        if (v == source) continue;
        if (excess[v] < 0) {
            return "negative excess " + format_rational(excess[v]) + " at vertex " +
                   std::to_string(v);
        }
    }
    return std::nullopt;
}

namespace {

struct Arc {
    int to = 0;
    int rev = 0;  // index of the paired arc in adj[to]
    Rat res;      // residual capacity
    Rat cap;      // original capacity (res > cap means flow runs backwards here)
};

class Solver {
public:
    Solver(const FlowNet& net, int source, int sink, const FlowState* warm,
           const MaxFlowOptions& opts)
        : net_(net), n_(net.size()), s_(source), t_(sink), opts_(opts) {
        if (s_ == t_ || s_ < 0 || s_ >= n_ || t_ < 0 || t_ >= n_) {
            throw InvariantError("bad source/sink");
        }
        build(warm);
    }

    CutResult run() {
        saturate_source();
        global_relabel();
        discharge_loop();

        CutResult result;
        result.value = ex_[t_];
        result.sink_side = reachable_to_sink();
        if (result.sink_side.contains(s_)) {
            throw InvariantError("source reaches sink in residual graph at optimum");
        }
        return_excess_to_source();

        result.flow = extract_flow();
        result.flow.excess = ex_;
        result.flow.label = h_;
        return result;
    }

private:
    void bump(std::atomic<std::uint64_t> SolverStats::* field) {
        if (opts_.stats) (opts_.stats->*field).fetch_add(1, std::memory_order_relaxed);
    }

    void build(const FlowState* warm) {
        adj_.assign(n_, {});
        ex_.assign(n_, Rat(0));
        h_.assign(n_, 0);
        cur_.assign(n_, 0);

        // One mutually-reverse arc pair per unordered vertex pair that carries
        // capacity in either direction.
        for (const auto& [key, cap] : net_.arcs()) {
            auto [v, w] = key;
            if (v > w && net_.capacity(w, v) > 0) continue; // pair handled from the other side
            Rat cap_fwd = cap;
            Rat cap_bwd = net_.capacity(w, v);
            Rat f = warm ? warm->flow(v, w) : Rat(0);
            adj_[v].push_back({w, static_cast<int>(adj_[w].size()), cap_fwd - f, cap_fwd});
            adj_[w].push_back({v, static_cast<int>(adj_[v].size()) - 1, cap_bwd + f, cap_bwd});
            pairs_.emplace_back(v, w);
            if (f != 0) {
                ex_[w] += f;
                ex_[v] -= f;
            }
        }
    }

    void saturate_source() {
        for (auto& a : adj_[s_]) {
            if (a.res > 0) {
                Rat delta = a.res;
                a.res = 0;
                adj_[a.to][a.rev].res += delta;
                ex_[a.to] += delta;
                ex_[s_] -= delta;
                bump(&SolverStats::pushes);
            }
        }
    }

    // Exact residual distances to the sink; vertices that cannot reach it
    // (always including the source) go to level n.
    void global_relabel() {
        bump(&SolverStats::global_relabels);
        std::fill(h_.begin(), h_.end(), n_);
        std::fill(cur_.begin(), cur_.end(), 0);
        h_[t_] = 0;
        std::deque<int> queue{t_};
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (const auto& a : adj_[x]) {
                // The paired arc runs a.to -> x; usable when it has residual.
                if (adj_[a.to][a.rev].res > 0 && h_[a.to] == n_ && a.to != s_) {
                    h_[a.to] = h_[x] + 1;
                    queue.push_back(a.to);
                }
            }
        }

        buckets_.assign(2 * n_ + 1, {});
        counts_.assign(n_, 0);
        hi_ = 0;
        for (int v = 0; v < n_; ++v) {
            if (h_[v] < n_) {
                ++counts_[h_[v]];
                if (v != s_ && v != t_ && ex_[v] > 0) activate(v);
            }
        }
        relabels_since_update_ = 0;
    }

    void activate(int v) {
        buckets_[h_[v]].push_back(v);
        hi_ = std::max(hi_, h_[v]);
    }

    void discharge_loop() {
        while (hi_ >= 0) {
            if (buckets_[hi_].empty()) {
                --hi_;
                continue;
            }
            int v = buckets_[hi_].back();
            buckets_[hi_].pop_back();
            if (h_[v] != hi_ || ex_[v] <= 0 || h_[v] >= n_ || v == s_ || v == t_) continue;
            discharge(v);
            if (opts_.global_relabel && relabels_since_update_ >= n_) {
                global_relabel();
            }
        }
    }

    void discharge(int v) {
        while (ex_[v] > 0) {
            if (cur_[v] == adj_[v].size()) {
                if (!relabel(v)) return; // v became dead (level n or gap)
                continue;
            }
            Arc& a = adj_[v][cur_[v]];
            if (a.res > 0 && h_[v] == h_[a.to] + 1) {
                Rat delta = std::min(ex_[v], a.res);
                a.res -= delta;
                adj_[a.to][a.rev].res += delta;
                ex_[v] -= delta;
                ex_[a.to] += delta;
                bump(&SolverStats::pushes);
                if (a.to != s_ && a.to != t_ && h_[a.to] < n_ && ex_[a.to] == delta) {
                    activate(a.to);
                }
            } else {
                ++cur_[v];
            }
        }
    }

    // False when v leaves the active pool for good.
    bool relabel(int v) {
        bump(&SolverStats::relabels);
        ++relabels_since_update_;
        int old = h_[v];
        --counts_[old];

        int best = 2 * n_;
        for (const auto& a : adj_[v]) {
            if (a.res > 0) best = std::min(best, h_[a.to] + 1);
        }

        if (counts_[old] == 0 && old < n_) {
            // Gap: every vertex strictly above the emptied level is cut off
            // from the sink.
            for (int u = 0; u < n_; ++u) {
                if (u != v && h_[u] > old && h_[u] < n_) {
                    --counts_[h_[u]];
                    h_[u] = n_;
                }
            }
            h_[v] = n_;
            return false;
        }
        if (best >= n_) {
            h_[v] = n_;
            return false;
        }
        h_[v] = best;
        ++counts_[best];
        cur_[v] = 0;
        hi_ = std::max(hi_, best);
        return true;
    }

    VertexSet reachable_to_sink() const {
        VertexSet seen(n_);
        seen.insert(t_);
        std::deque<int> queue{t_};
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (const auto& a : adj_[x]) {
                if (adj_[a.to][a.rev].res > 0 && !seen.contains(a.to)) {
                    seen.insert(a.to);
                    queue.push_back(a.to);
                }
            }
        }
        return seen;
    }

    // Second phase: excess trapped at dead vertices drains back to the source
    // along arcs that currently carry flow toward them (res > cap), which
    // cancels flow on the forward arc rather than creating new flow.
    void return_excess_to_source() {
        std::vector<int> d(n_, n_ + 1);
        d[s_] = 0;
        std::deque<int> queue{s_};
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (const auto& a : adj_[x]) {
                // a.to can step to x when the arc a.to -> x carries returnable flow.
                const Arc& ra = adj_[a.to][a.rev];
                if (ra.res > ra.cap && d[a.to] > d[x] + 1) {
                    d[a.to] = d[x] + 1;
                    queue.push_back(a.to);
                }
            }
        }

        std::vector<std::vector<int>> buckets(2 * n_ + 2);
        int hi = -1;
        for (int v = 0; v < n_; ++v) {
            if (v != s_ && v != t_ && ex_[v] > 0) {
                if (d[v] > n_) {
                    throw InvariantError("trapped excess cannot reach the source");
                }
                buckets[d[v]].push_back(v);
                hi = std::max(hi, d[v]);
            }
        }
        std::vector<size_t> cur(n_, 0);
        while (hi >= 0) {
            if (buckets[hi].empty()) {
                --hi;
                continue;
            }
            int v = buckets[hi].back();
            buckets[hi].pop_back();
            if (d[v] != hi || ex_[v] <= 0) continue;
            while (ex_[v] > 0) {
                if (cur[v] == adj_[v].size()) {
                    int best = 2 * n_ + 1;
                    for (const auto& a : adj_[v]) {
                        if (a.res > a.cap) best = std::min(best, d[a.to] + 1);
                    }
                    if (best > 2 * n_) {
                        throw InvariantError("excess return lost every usable arc");
                    }
                    d[v] = best;
                    cur[v] = 0;
                    continue;
                }
                Arc& a = adj_[v][cur[v]];
                if (a.res > a.cap && d[v] == d[a.to] + 1) {
                    Rat delta = std::min(ex_[v], Rat(a.res - a.cap));
                    a.res -= delta;
                    adj_[a.to][a.rev].res += delta;
                    ex_[v] -= delta;
                    ex_[a.to] += delta;
                    bump(&SolverStats::pushes);
                    if (a.to != s_ && a.to != t_ && ex_[a.to] == delta) {
                        buckets[d[a.to]].push_back(a.to);
                        hi = std::max(hi, d[a.to]);
                    }
                } else {
                    ++cur[v];
                }
            }
            buckets[d[v]].push_back(v); // harmless if already drained; skipped as stale
            hi = std::max(hi, d[v]);
        }

        for (int v = 0; v < n_; ++v) {
            if (v != s_ && v != t_ && ex_[v] != 0) {
                throw InvariantError("excess survived the return phase");
            }
        }
    }

    FlowState extract_flow() const {
        FlowState f(n_);
        for (auto [v, w] : pairs_) {
            // The v -> w arc of the pair was pushed first, so it sits before
            // its reverse in adj_[v] only by construction order; find by scan.
            for (const auto& a : adj_[v]) {
                if (a.to == w) {
                    Rat val = a.cap - a.res;
                    if (val != 0) f.set_flow(v, w, val);
                    break;
                }
            }
        }
        return f;
    }

    const FlowNet& net_;
    int n_, s_, t_;
    MaxFlowOptions opts_;
    std::vector<std::vector<Arc>> adj_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<Rat> ex_;
    std::vector<int> h_;
    std::vector<size_t> cur_;
    std::vector<std::vector<int>> buckets_;
    std::vector<int> counts_;
    int hi_ = -1;
    int relabels_since_update_ = 0;
};

} // namespace

CutResult max_flow(const FlowNet& net, int source, int sink, const FlowState* warm_start,
                   const MaxFlowOptions& opts) {
    if (opts.stats) opts.stats->maxflow_calls.fetch_add(1, std::memory_order_relaxed);

    const FlowState* warm = warm_start && !warm_start->empty() ? warm_start : nullptr;
    if (warm) {
        if (auto violation = validate_preflow(net, source, *warm)) {
            if (opts.strict_warm_start) {
                throw InvariantError("invalid warm start: " + *violation);
            }
            if (opts.stats) opts.stats->warm_start_fallbacks.fetch_add(1, std::memory_order_relaxed);
            warm = nullptr;
        }
    }

    Solver solver(net, source, sink, warm, opts);
    return solver.run();
}

} // namespace psp::flow
