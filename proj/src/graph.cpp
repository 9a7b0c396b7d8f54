#include "psp/graph.hpp"

#include "psp/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace psp {

WeightedGraph WeightedGraph::from_edges(int n, std::vector<WeightedEdge> edges,
                                        std::vector<long> labels) {
    if (n < 2) throw ParseError("a graph needs at least 2 vertices, got " + std::to_string(n));
    if (labels.empty()) {
        labels.resize(n);
        for (int v = 0; v < n; ++v) labels[v] = v + 1;
    }
    if (static_cast<int>(labels.size()) != n) {
        throw InvariantError("label vector size does not match vertex count");
    }

    std::map<std::pair<int, int>, Rat> merged;
    for (auto& e : edges) {
        int u = e.u, v = e.v;
        if (u > v) std::swap(u, v);
        if (u == v) throw ParseError("self-loop on vertex " + std::to_string(labels[u]));
        if (u < 0 || v >= n) throw InvariantError("edge endpoint out of range");
        if (e.weight <= 0) throw ParseError("non-positive weight on edge {" +
                                            std::to_string(labels[u]) + "," +
                                            std::to_string(labels[v]) + "}");
        merged[{u, v}] += e.weight;
    }

    WeightedGraph g;
    g.n_ = n;
    g.labels_ = std::move(labels);
    g.edges_.reserve(merged.size());
    for (auto& [key, w] : merged) {
        g.edges_.push_back({key.first, key.second, w});
    }
    return g;
}

Rat WeightedGraph::pair_weight(int u, int v) const {
    if (u > v) std::swap(u, v);
    for (const auto& e : edges_) {
        if (e.u == u && e.v == v) return e.weight;
    }
    return Rat(0);
}

Rat WeightedGraph::total_weight() const {
    Rat total(0);
    for (const auto& e : edges_) total += e.weight;
    return total;
}

Rat Digraph::arc(int v, int w) const {
    if (v < 0 || v >= n_ || w < 0 || w >= n_) return Rat(0);
    const auto& row = out_[v];
    auto it = std::lower_bound(row.begin(), row.end(), w,
                               [](const std::pair<int, Rat>& a, int b) { return a.first < b; });
    if (it != row.end() && it->first == w) return it->second;
    return Rat(0);
}

WeightedGraph parse_edge_list(std::string_view text) {
    struct RawEdge {
        long u, v;
        Rat w;
    };
    std::vector<RawEdge> raw;
    std::map<long, int> ids; // numeric label -> slot, ordered

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::istringstream in{std::string(line)};
        std::string tu, tv, tw;
        if (!(in >> tu)) continue; // blank or comment-only line
        if (!(in >> tv >> tw)) throw ParseError("expected 'u v w'", line_no);
        std::string extra;
        if (in >> extra) throw ParseError("trailing token '" + extra + "'", line_no);

        long u, v;
        try {
            size_t used = 0;
            u = std::stol(tu, &used);
            if (used != tu.size()) throw std::invalid_argument(tu);
            v = std::stol(tv, &used);
            if (used != tv.size()) throw std::invalid_argument(tv);
        } catch (const std::exception&) {
            throw ParseError("vertex ids must be integers", line_no);
        }
        auto w = parse_rational(tw);
        if (!w) throw ParseError("bad weight '" + tw + "'", line_no);
        if (*w <= 0) throw ParseError("weight must be positive", line_no);
        if (u == v) throw ParseError("self-loop on vertex " + std::to_string(u), line_no);

        ids.emplace(u, 0);
        ids.emplace(v, 0);
        raw.push_back({u, v, std::move(*w)});
    }

    if (ids.size() < 2) throw ParseError("need at least 2 vertices, got " + std::to_string(ids.size()));

    // Compact labels preserving numeric order.
    std::vector<long> labels;
    labels.reserve(ids.size());
    for (auto& [label, slot] : ids) {
        slot = static_cast<int>(labels.size());
        labels.push_back(label);
    }

    std::vector<WeightedEdge> edges;
    edges.reserve(raw.size());
    for (auto& e : raw) {
        edges.push_back({ids[e.u], ids[e.v], std::move(e.w)});
    }
    int n = static_cast<int>(labels.size());
    return WeightedGraph::from_edges(n, std::move(edges), std::move(labels));
}

Digraph orient(const WeightedGraph& g) {
    int n = g.size();
    std::vector<std::vector<std::pair<int, Rat>>> out(n), in(n);
    for (const auto& e : g.edges()) {
        out[e.u].emplace_back(e.v, e.weight);
        in[e.v].emplace_back(e.u, e.weight);
    }
    for (auto& row : out) std::sort(row.begin(), row.end(),
                                    [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& row : in) std::sort(row.begin(), row.end(),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
    return Digraph(n, std::move(out), std::move(in));
}

Rat cut_value(const Digraph& d, const VertexSet& from, const VertexSet& to) {
    Rat total(0);
    for (int v : from.elements()) {
        for (const auto& [w, c] : d.out_arcs(v)) {
            if (to.contains(w)) total += c;
        }
    }
    return total;
}

Rat incut(const Digraph& d, const VertexSet& b) {
    if (b.empty()) throw InvariantError("incut of the empty set is undefined");
    Rat total(0);
    for (int v : b.elements()) {
        for (const auto& [u, c] : d.in_arcs(v)) {
            if (!b.contains(u)) total += c;
        }
    }
    return total;
}

} // namespace psp
