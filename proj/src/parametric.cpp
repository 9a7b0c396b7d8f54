#include "psp/parametric.hpp"

#include "psp/errors.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>
#include <variant>

namespace psp {

ParametricNetwork::ParametricNetwork(int prefix, std::vector<PwlFunction> source_cap,
                                     std::vector<PwlFunction> sink_cap,
                                     std::vector<std::vector<std::pair<int, Rat>>> inner_arcs,
                                     std::vector<Rat> in_weight_below, std::vector<Rat> cap_to_sink)
    : prefix_(prefix),
      source_cap_(std::move(source_cap)),
      sink_cap_(std::move(sink_cap)),
      inner_arcs_(std::move(inner_arcs)),
      in_weight_below_(std::move(in_weight_below)),
      cap_to_sink_(std::move(cap_to_sink)) {
    size_t inner = static_cast<size_t>(prefix_) - 1;
    if (prefix_ < 2 || source_cap_.size() != inner || sink_cap_.size() != inner ||
        inner_arcs_.size() != inner || in_weight_below_.size() != inner ||
        cap_to_sink_.size() != inner) {
        throw InvariantError("parametric network pieces disagree on the prefix size");
    }
}

Rat ParametricNetwork::inner_cap(int v, int w) const {
    const auto& row = inner_arcs_[v];
    auto it = std::lower_bound(row.begin(), row.end(), w,
                               [](const std::pair<int, Rat>& a, int b) { return a.first < b; });
    if (it != row.end() && it->first == w) return it->second;
    return Rat(0);
}

PwlFunction ParametricNetwork::cut_capacity(const VertexSet& from, const VertexSet& to) const {
    PwlFunction total;
    Rat constants(0);
    if (from.contains(source_node())) {
        for (int v = 0; v < prefix_ - 1; ++v) {
            if (to.contains(v)) total += source_cap_[v];
        }
    }
    for (int v = 0; v < prefix_ - 1; ++v) {
        if (!from.contains(v)) continue;
        if (to.contains(sink())) total += sink_cap_[v];
        for (const auto& [w, c] : inner_arcs_[v]) {
            if (to.contains(w)) constants += c;
        }
    }
    return total + constants;
}

ParametricNetwork build_parametric_network(const Digraph& d, int prefix,
                                           std::span<const PwlFunction> potentials) {
    if (prefix < 2 || prefix > d.size()) throw InvariantError("prefix out of range");
    if (potentials.size() < static_cast<size_t>(prefix) - 1) {
        throw InvariantError("need one potential per vertex below the sink");
    }
    int sink = prefix - 1;
    std::vector<PwlFunction> source_cap, sink_cap;
    std::vector<std::vector<std::pair<int, Rat>>> inner(prefix - 1);
    std::vector<Rat> in_below, to_sink;
    for (int v = 0; v < prefix - 1; ++v) {
        source_cap.push_back(positive_part(-potentials[v]));
        sink_cap.push_back(positive_part(potentials[v]) + d.arc(v, sink));
        for (const auto& [w, c] : d.out_arcs(v)) {
            if (w < sink) inner[v].emplace_back(w, c);
        }
        Rat below(0);
        for (const auto& [u, c] : d.in_arcs(v)) below += c; // all in-arcs come from below
        in_below.push_back(std::move(below));
        to_sink.push_back(d.arc(v, sink));
    }
    return ParametricNetwork(prefix, std::move(source_cap), std::move(sink_cap), std::move(inner),
                             std::move(in_below), std::move(to_sink));
}

Rat gamma_upper_bound(const ParametricNetwork& pn) {
    Rat best(0);
    bool first = true;
    for (int v = 0; v < pn.prefix() - 1; ++v) {
        Rat within = pn.cap_to_sink(v);
        for (const auto& [w, c] : pn.inner_arcs(v)) within += c;
        Rat bound = pn.in_weight_below(v) + within;
        if (first || bound > best) {
            best = std::move(bound);
            first = false;
        }
    }
    return best;
}

Rat gamma_lower_bound(const ParametricNetwork& pn, std::span<const OptGamma> dropout) {
    if (dropout.size() < static_cast<size_t>(pn.prefix()) - 1) {
        throw InvariantError("need one dropout threshold per vertex below the sink");
    }
    Rat best(0);
    bool first = true;
    for (int v = 0; v < pn.prefix() - 1; ++v) {
        Rat bound = pn.cap_to_sink(v);
        if (dropout[v] && *dropout[v] > bound) bound = *dropout[v];
        if (first || bound < best) {
            best = std::move(bound);
            first = false;
        }
    }
    return best;
}

ContractedNetwork contract_network(const ParametricNetwork& pn, const Rat& gamma,
                                   const VertexSet& source_side, const VertexSet& sink_side,
                                   const flow::FlowState& carried) {
    int prefix = pn.prefix();
    if (!source_side.contains(pn.source_node())) {
        throw InvariantError("source side must contain the source node");
    }
    if (!sink_side.contains(pn.sink())) throw InvariantError("sink side must contain the sink");
    if (source_side.intersects(sink_side)) {
        throw InvariantError("source and sink sides overlap");
    }

    ContractedNetwork out;
    std::vector<int> to_net(prefix + 1, -1);
    for (int v = 0; v < prefix; ++v) {
        if (!source_side.contains(v) && !sink_side.contains(v)) {
            to_net[v] = static_cast<int>(out.ids.size());
            out.ids.push_back(v);
        }
    }
    int inner_count = static_cast<int>(out.ids.size());
    out.source = inner_count;
    out.sink = inner_count + 1;
    out.ids.push_back(pn.source_node());
    out.ids.push_back(pn.sink());
    out.net = flow::FlowNet(inner_count + 2);

    // Merged capacities at this gamma. Arcs between the two terminals are
    // dropped: they would saturate instantly and shift every cut equally.
    std::vector<Rat> src_cap(inner_count, Rat(0)), snk_cap(inner_count, Rat(0));
    for (int net_v = 0; net_v < inner_count; ++net_v) {
        int v = out.ids[net_v];
        src_cap[net_v] = pn.source_cap(v)(gamma);
        snk_cap[net_v] = pn.sink_cap(v)(gamma);
    }
    for (int u = 0; u < prefix - 1; ++u) {
        if (source_side.contains(u)) {
            for (const auto& [w, c] : pn.inner_arcs(u)) {
                if (to_net[w] >= 0) src_cap[to_net[w]] += c;
            }
        } else if (to_net[u] >= 0) {
            for (const auto& [w, c] : pn.inner_arcs(u)) {
                if (to_net[w] >= 0) {
                    out.net.add_arc(to_net[u], to_net[w], c);
                } else if (sink_side.contains(w)) {
                    snk_cap[to_net[u]] += c;
                }
            }
        }
    }
    for (int net_v = 0; net_v < inner_count; ++net_v) {
        out.net.add_arc(out.source, net_v, src_cap[net_v]);
        out.net.add_arc(net_v, out.sink, snk_cap[net_v]);
    }

    // Adapt the carried flow: merge entries onto the contracted terminals,
    // then clip into the new capacity range. Anything this leaves imbalanced
    // is caught by preflow validation downstream.
    std::vector<Rat> src_flow(inner_count, Rat(0)), snk_flow(inner_count, Rat(0));
    out.warm = flow::FlowState(inner_count + 2);
    for (const auto& [key, f] : carried.entries()) {
        if (f <= 0) continue; // the mirrored entry handles the other sign
        auto [a, b] = key;
        bool a_src = source_side.contains(a), b_src = source_side.contains(b);
        bool a_snk = sink_side.contains(a), b_snk = sink_side.contains(b);
        if (a_src && b_src) continue;
        if (a_snk && b_snk) continue;
        if ((a_src && b_snk) || (a_snk && b_src)) continue; // terminal-to-terminal: dropped
        if (a_src) {
            src_flow[to_net[b]] += f;
        } else if (b_src) {
            src_flow[to_net[a]] -= f;
        } else if (b_snk) {
            snk_flow[to_net[a]] += f;
        } else if (a_snk) {
            snk_flow[to_net[b]] -= f;
        } else {
            out.warm.set_flow(to_net[a], to_net[b], f);
        }
    }
    for (int net_v = 0; net_v < inner_count; ++net_v) {
        Rat sf = std::min(std::max(src_flow[net_v], Rat(0)), src_cap[net_v]);
        Rat tf = std::min(std::max(snk_flow[net_v], Rat(0)), snk_cap[net_v]);
        if (sf != 0) out.warm.set_flow(out.source, net_v, sf);
        if (tf != 0) out.warm.set_flow(net_v, out.sink, tf);
    }
    return out;
}

namespace {

struct Task {
    Rat lo, hi;
    flow::FlowState carried; // parametric ids, valid at lo
    VertexSet source_side;   // over prefix + 1, contains the source node
    VertexSet sink_side;     // over prefix + 1, contains the sink vertex
};

// Remap a solved flow from contracted-net ids back to parametric ids so the
// next contraction can merge it regardless of how the sides grow.
flow::FlowState flow_to_parametric(const flow::FlowState& net_flow, const ContractedNetwork& cn,
                                   int universe) {
    flow::FlowState out(universe);
    for (const auto& [key, f] : net_flow.entries()) {
        if (f <= 0) continue;
        out.set_flow(cn.ids[key.first], cn.ids[key.second], f);
    }
    return out;
}

VertexSet strip_source(const VertexSet& members, int prefix) {
    VertexSet out(prefix);
    for (int v : members.elements()) {
        if (v < prefix) out.insert(v);
    }
    return out;
}

class BreakpointSearch {
public:
    BreakpointSearch(const ParametricNetwork& pn, const ParametricOptions& opts)
        : pn_(pn), opts_(opts) {
        mf_opts_.strict_warm_start = false; // carried flows are best-effort
        mf_opts_.global_relabel = opts.global_relabel;
        mf_opts_.stats = opts.stats;
    }

    BreakpointList run(std::span<const OptGamma> dropout) {
        int universe = pn_.prefix() + 1;
        Rat lo = gamma_lower_bound(pn_, dropout);
        Rat hi = gamma_upper_bound(pn_);
        if (lo > hi) {
            throw InvariantError("critical-range bounds crossed: " + format_rational(lo) + " > " +
                                 format_rational(hi));
        }
        if (opts_.trace) {
            opts_.trace->gamma_lo = lo;
            opts_.trace->gamma_hi = hi;
        }

        VertexSet source_only(universe), sink_only(universe);
        source_only.insert(pn_.source_node());
        sink_only.insert(pn_.sink());

        if (lo == hi) {
            if (opts_.trace) opts_.trace->trivial_range = true;
            record(Breakpoint{lo, strip_source(sink_only, pn_.prefix())});
            return finish();
        }

        ContractedNetwork base =
            contract_network(pn_, lo, source_only, sink_only, flow::FlowState(universe));
        auto cut = flow::max_flow(base.net, base.source, base.sink, &base.warm, mf_opts_);
        if (opts_.trace) {
            opts_.trace->initial_cut_value = cut.value;
            VertexSet side(universe);
            for (int x : cut.sink_side.elements()) side.insert(base.ids[x]);
            opts_.trace->initial_sink_side = strip_source(side, pn_.prefix());
        }
        tasks_.push_back(Task{lo, hi, flow_to_parametric(cut.flow, base, universe), source_only,
                              sink_only});

        if (opts_.threads > 1) {
            run_parallel();
        } else {
            while (!tasks_.empty()) {
                Task task = std::move(tasks_.back());
                tasks_.pop_back();
                dispatch(process(std::move(task)));
            }
        }
        return finish();
    }

private:
    using Outcome = std::variant<Breakpoint, std::pair<Task, Task>>;

    Outcome process(Task task) {
        if (opts_.trace) opts_.trace->task_intervals.emplace_back(task.lo, task.hi);
        int universe = pn_.prefix() + 1;

        PwlFunction lhs = pn_.cut_capacity(task.source_side, task.source_side.complement());
        PwlFunction rhs = pn_.cut_capacity(task.sink_side.complement(), task.sink_side);
        Rat gbar = solve_crossing(lhs, rhs, task.lo, task.hi);
        if (opts_.trace) opts_.trace->crossings.push_back(gbar);

        ContractedNetwork cn =
            contract_network(pn_, gbar, task.source_side, task.sink_side, task.carried);
        auto cut = flow::max_flow(cn.net, cn.source, cn.sink, &cn.warm, mf_opts_);

        std::vector<int> grown; // parametric inner vertices newly on the sink side
        for (int x : cut.sink_side.elements()) {
            if (x != cn.sink) grown.push_back(cn.ids[x]);
        }
        if (grown.empty()) {
            return Breakpoint{gbar, strip_source(task.sink_side, pn_.prefix())};
        }

        VertexSet sink_ext = task.sink_side;
        for (int v : grown) sink_ext.insert(v);
        VertexSet source_ext = task.source_side;
        for (int net_v = 0; net_v < static_cast<int>(cn.ids.size()) - 2; ++net_v) {
            if (!cut.sink_side.contains(net_v)) source_ext.insert(cn.ids[net_v]);
        }

        Task right{gbar, std::move(task.hi), flow_to_parametric(cut.flow, cn, universe),
                   std::move(source_ext), std::move(task.sink_side)};
        Task left{std::move(task.lo), std::move(gbar), std::move(task.carried),
                  std::move(task.source_side), std::move(sink_ext)};
        // Right below left: LIFO service resolves the left slice first.
        return std::make_pair(std::move(right), std::move(left));
    }

    void dispatch(Outcome&& outcome) {
        if (std::holds_alternative<Breakpoint>(outcome)) {
            record(std::get<Breakpoint>(std::move(outcome)));
        } else {
            auto& [right, left] = std::get<std::pair<Task, Task>>(outcome);
            tasks_.push_back(std::move(right));
            tasks_.push_back(std::move(left));
        }
    }

    void record(Breakpoint bp) { records_.push_back(std::move(bp)); }

    void run_parallel() {
        std::mutex mu;
        std::condition_variable cv;
        int in_flight = 0;
        std::exception_ptr failure;

        auto worker = [&] {
            std::unique_lock lock(mu);
            for (;;) {
                cv.wait(lock, [&] {
                    return failure || !tasks_.empty() || in_flight == 0;
                });
                if (failure || (tasks_.empty() && in_flight == 0)) return;
                if (tasks_.empty()) continue; // spurious wake between the two conditions
                Task task = std::move(tasks_.back());
                tasks_.pop_back();
                ++in_flight;
                lock.unlock();
                try {
                    Outcome outcome = process(std::move(task));
                    lock.lock();
                    dispatch(std::move(outcome));
                } catch (...) {
                    lock.lock();
                    if (!failure) failure = std::current_exception();
                }
                --in_flight;
                cv.notify_all();
            }
        };

        std::vector<std::thread> pool;
        int workers = std::max(2, opts_.threads);
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    BreakpointList finish() {
        std::sort(records_.begin(), records_.end(),
                  [](const Breakpoint& a, const Breakpoint& b) { return a.gamma < b.gamma; });

        // Coincident gammas collapse to the finest set: the coarser entries
        // cover empty intervals. Everything else must nest strictly.
        BreakpointList out;
        for (auto& bp : records_) {
            if (!out.empty() && out.back().gamma == bp.gamma) {
                if (!bp.members.is_subset_of(out.back().members)) {
                    throw InvariantError("coincident breakpoints do not nest");
                }
                out.back().members = std::move(bp.members);
                continue;
            }
            out.push_back(std::move(bp));
        }

        if (out.empty()) throw InvariantError("breakpoint scan produced no steps");
        VertexSet full = VertexSet::full(pn_.prefix());
        const VertexSet* prev = &full;
        for (const auto& bp : out) {
            if (!bp.members.contains(pn_.sink())) {
                throw InvariantError("breakpoint set lost the sink");
            }
            if (!(bp.members.is_subset_of(*prev) && bp.members.size() < prev->size())) {
                throw InvariantError("breakpoint sets do not shrink strictly");
            }
            prev = &bp.members;
        }
        if (out.back().members.size() != 1) {
            throw InvariantError("final breakpoint set is not the bare sink");
        }
        if (opts_.stats) {
            opts_.stats->breakpoints.fetch_add(out.size(), std::memory_order_relaxed);
        }
        return out;
    }

    const ParametricNetwork& pn_;
    ParametricOptions opts_;
    flow::MaxFlowOptions mf_opts_;
    std::vector<Task> tasks_;
    std::vector<Breakpoint> records_;
};

} // namespace

BreakpointList parametric_min_cut(const ParametricNetwork& pn, std::span<const OptGamma> dropout,
                                  const ParametricOptions& opts) {
    ParametricOptions effective = opts;
    if (opts.threads > 1) effective.trace = nullptr; // trace is a sequential-only facility
    BreakpointSearch search(pn, effective);
    return search.run(dropout);
}

} // namespace psp
