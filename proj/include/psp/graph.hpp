#pragma once

#include "psp/rational.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace psp {

// Set of vertex ids over a fixed universe [0, universe). Small and dense;
// instances never exceed a few hundred vertices.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(int universe) : bits_(universe, false) {}

    static VertexSet of(int universe, std::initializer_list<int> members) {
        VertexSet s(universe);
        for (int v : members) s.insert(v);
        return s;
    }
    static VertexSet full(int universe) {
        VertexSet s(universe);
        for (int v = 0; v < universe; ++v) s.insert(v);
        return s;
    }

    int universe() const { return static_cast<int>(bits_.size()); }
    int size() const { return count_; }
    bool empty() const { return count_ == 0; }
    bool contains(int v) const { return v >= 0 && v < universe() && bits_[v]; }

    void insert(int v) {
        if (!bits_[v]) {
            bits_[v] = true;
            ++count_;
        }
    }
    void erase(int v) {
        if (bits_[v]) {
            bits_[v] = false;
            --count_;
        }
    }

    VertexSet complement() const {
        VertexSet s(universe());
        for (int v = 0; v < universe(); ++v) {
            if (!bits_[v]) s.insert(v);
        }
        return s;
    }

    bool is_subset_of(const VertexSet& other) const {
        for (int v = 0; v < universe(); ++v) {
            if (bits_[v] && !other.contains(v)) return false;
        }
        return true;
    }

    bool intersects(const VertexSet& other) const {
        int m = std::min(universe(), other.universe());
        for (int v = 0; v < m; ++v) {
            if (bits_[v] && other.contains(v)) return true;
        }
        return false;
    }

    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(count_);
        for (int v = 0; v < universe(); ++v) {
            if (bits_[v]) out.push_back(v);
        }
        return out;
    }

    bool operator==(const VertexSet& other) const {
        return bits_ == other.bits_;
    }

private:
    std::vector<bool> bits_;
    int count_ = 0;
};

struct WeightedEdge {
    int u = 0; // always u < v
    int v = 0;
    Rat weight; // always > 0
};

// Undirected graph with positive rational edge weights. Vertices are 0-indexed
// internally; labels_ keeps the original input labels for display (1-indexed
// by default). Parallel edges are merged by summing their weights.
class WeightedGraph {
public:
    // Validates, normalizes endpoint order and merges duplicates.
    // Labels default to 1..n.
    static WeightedGraph from_edges(int n, std::vector<WeightedEdge> edges,
                                    std::vector<long> labels = {});

    int size() const { return n_; }
    const std::vector<WeightedEdge>& edges() const { return edges_; }
    long label_of(int v) const { return labels_[v]; }
    const std::vector<long>& labels() const { return labels_; }

    // Weight of the edge {u, v}; zero when absent.
    Rat pair_weight(int u, int v) const;
    Rat total_weight() const;

private:
    int n_ = 0;
    std::vector<WeightedEdge> edges_;
    std::vector<long> labels_;
};

// Digraph whose arcs all point from the smaller vertex id to the larger one.
// Produced by orient(); capacity lookups default to zero.
class Digraph {
public:
    Digraph() = default;
    Digraph(int n, std::vector<std::vector<std::pair<int, Rat>>> out,
            std::vector<std::vector<std::pair<int, Rat>>> in)
        : n_(n), out_(std::move(out)), in_(std::move(in)) {}

    int size() const { return n_; }
    Rat arc(int v, int w) const;
    const std::vector<std::pair<int, Rat>>& out_arcs(int v) const { return out_[v]; }
    const std::vector<std::pair<int, Rat>>& in_arcs(int v) const { return in_[v]; }

private:
    int n_ = 0;
    std::vector<std::vector<std::pair<int, Rat>>> out_; // sorted by head
    std::vector<std::vector<std::pair<int, Rat>>> in_;  // sorted by tail
};

// Parses "u v w" lines (one edge per line, '#' comments, blank lines skipped).
// Weights may be integers, decimals or "p/q". Throws ParseError with the
// offending 1-based line number on malformed input, self-loops, non-positive
// weights, or fewer than two distinct vertices. Input labels are compacted to
// 0..n-1 preserving numeric order.
WeightedGraph parse_edge_list(std::string_view text);

// Directs every edge {u, v}, u < v, as the arc u -> w with the same weight.
Digraph orient(const WeightedGraph& g);

// Total capacity of arcs leaving `from` and entering `to`. The sets need not
// partition the vertices; only ordered pairs (v in from, w in to) count.
Rat cut_value(const Digraph& d, const VertexSet& from, const VertexSet& to);

// Capacity entering b from its complement: cut_value(V \ b, b).
// Throws InvariantError when b is empty.
Rat incut(const Digraph& d, const VertexSet& b);

} // namespace psp
