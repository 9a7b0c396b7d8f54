#include "psp/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace psp::report {

namespace {

std::vector<long> block_labels(const WeightedGraph& g, const VertexSet& block) {
    std::vector<long> labels;
    labels.reserve(block.size());
    for (int v : block.elements()) labels.push_back(g.label_of(v));
    std::sort(labels.begin(), labels.end());
    return labels;
}

std::string block_string(const WeightedGraph& g, const VertexSet& block) {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (long label : block_labels(g, block)) {
        if (!first) out << ',';
        out << label;
        first = false;
    }
    out << '}';
    return out.str();
}

// Blocks in label order so renaming vertices permutes content, not layout.
std::vector<const VertexSet*> ordered_blocks(const WeightedGraph& g,
                                             const std::vector<VertexSet>& blocks) {
    std::vector<const VertexSet*> order;
    order.reserve(blocks.size());
    for (const auto& b : blocks) order.push_back(&b);
    std::sort(order.begin(), order.end(), [&](const VertexSet* a, const VertexSet* b) {
        return block_labels(g, *a) < block_labels(g, *b);
    });
    return order;
}

std::string partition_string(const WeightedGraph& g, const Partition& p) {
    std::string out;
    for (const VertexSet* block : ordered_blocks(g, p.blocks())) {
        if (!out.empty()) out += '|';
        out += block_string(g, *block);
    }
    return out;
}

} // namespace

std::string render_tsv(const WeightedGraph& g, const PartitionFunction& psp) {
    std::string out = "-inf\t" + partition_string(g, psp.partitions[0]) + "\n";
    for (size_t k = 0; k < psp.criticals.size(); ++k) {
        out += format_rational(psp.criticals[k]);
        out += '\t';
        out += partition_string(g, psp.partitions[k + 1]);
        out += '\n';
    }
    return out;
}

std::string render_json(const WeightedGraph& g, const PartitionFunction& psp) {
    nlohmann::ordered_json doc;
    doc["critical_values"] = nlohmann::ordered_json::array();
    for (const auto& gamma : psp.criticals) {
        doc["critical_values"].push_back(format_rational(gamma));
    }
    doc["partitions"] = nlohmann::ordered_json::array();
    doc["clusters_by_interval"] = nlohmann::ordered_json::array();
    for (const auto& p : psp.partitions) {
        nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
        nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
        for (const VertexSet* block : ordered_blocks(g, p.blocks())) {
            auto labels = block_labels(g, *block);
            blocks.push_back(labels);
            if (labels.size() > 1) clusters.push_back(labels);
        }
        doc["partitions"].push_back(std::move(blocks));
        doc["clusters_by_interval"].push_back(std::move(clusters));
    }
    return doc.dump(2) + "\n";
}

std::string render_dot(const WeightedGraph& g, const PartitionFunction& psp) {
    std::vector<std::string> nodes;
    std::vector<std::string> edges;
    auto add_node = [&](const std::string& name) {
        if (std::find(nodes.begin(), nodes.end(), name) == nodes.end()) nodes.push_back(name);
    };

    for (const VertexSet* block : ordered_blocks(g, psp.partitions[0].blocks())) {
        add_node(block_string(g, *block));
    }
    for (size_t k = 1; k < psp.partitions.size(); ++k) {
        const Partition& parent = psp.partitions[k - 1];
        for (const VertexSet* block : ordered_blocks(g, psp.partitions[k].blocks())) {
            std::string child = block_string(g, *block);
            add_node(child);
            const VertexSet& up = parent.block_containing(block->elements().front());
            std::string from = block_string(g, up);
            if (from != child) {
                edges.push_back("  \"" + from + "\" -> \"" + child + "\" [label=\"" +
                                format_rational(psp.criticals[k - 1]) + "\"];\n");
            }
        }
    }

    std::string out = "digraph clusters {\n  rankdir=TB;\n  node [shape=box];\n";
    for (const auto& name : nodes) out += "  \"" + name + "\";\n";
    for (const auto& e : edges) out += e;
    out += "}\n";
    return out;
}

std::string render_clusters(const WeightedGraph& g, const std::vector<VertexSet>& clusters) {
    std::string out;
    for (const VertexSet* block : ordered_blocks(g, clusters)) {
        out += block_string(g, *block);
        out += '\n';
    }
    return out;
}

std::string render_mmi(const WeightedGraph& g, const Rat& value, const Partition& fundamental) {
    return "mmi=" + format_rational(value) + "; fundamental=" + partition_string(g, fundamental) +
           "\n";
}

std::string render_stats(const WeightedGraph& g, const SolverStats& stats, double wall_ms) {
    std::ostringstream out;
    out << "vertices=" << g.size() << " edges=" << g.edges().size()
        << " total_weight=" << format_rational(g.total_weight()) << "\n";
    out << "maxflow_calls=" << stats.maxflow_calls.load()
        << " breakpoints=" << stats.breakpoints.load() << " pushes=" << stats.pushes.load()
        << " relabels=" << stats.relabels.load()
        << " global_relabels=" << stats.global_relabels.load()
        << " warm_start_fallbacks=" << stats.warm_start_fallbacks.load() << "\n";
    out << "wall_ms=" << wall_ms << "\n";
    return out.str();
}

} // namespace psp::report
