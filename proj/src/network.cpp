#include "colexforge/network.hpp"

#include "colexforge/error.hpp"

#include <algorithm>
#include <numeric>

namespace colexforge {

ColexNetwork::ColexNetwork(std::vector<ConceptNode> nodes, std::vector<ColexEdge> edges, std::size_t threshold)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), threshold_(threshold) {
    std::sort(nodes_.begin(), nodes_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.concept_a, a.concept_b) < std::tie(b.concept_a, b.concept_b);
    });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!lookup_.emplace(nodes_[i].id, i).second) {
            throw Error(ErrorKind::InconsistentInputs, "duplicate node " + nodes_[i].id);
        }
    }
    incidence_.resize(nodes_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        const auto label = edge.concept_a + " -- " + edge.concept_b;
        if (!(edge.concept_a < edge.concept_b)) {
            throw Error(ErrorKind::InconsistentInputs, "edge " + label + " is a self-loop or not canonical");
        }
        if (e > 0 && edges_[e - 1].concept_a == edge.concept_a && edges_[e - 1].concept_b == edge.concept_b) {
            throw Error(ErrorKind::InconsistentInputs, "parallel edge " + label);
        }
        if (edge.varieties.empty() || edge.weight() < std::max<std::size_t>(threshold_, 1)) {
            throw Error(ErrorKind::InconsistentInputs, "edge " + label + " below the family threshold");
        }
        auto a = lookup_.find(edge.concept_a);
        auto b = lookup_.find(edge.concept_b);
        if (a == lookup_.end() || b == lookup_.end()) {
            throw Error(ErrorKind::InconsistentInputs, "edge " + label + " references a missing node");
        }
        incidence_[a->second].push_back(e);
        incidence_[b->second].push_back(e);
    }
}

bool ColexNetwork::has_node(const std::string& concept_id) const { return lookup_.contains(concept_id); }

std::size_t ColexNetwork::node_index(const std::string& concept_id) const {
    auto it = lookup_.find(concept_id);
    if (it == lookup_.end()) throw Error(ErrorKind::UnknownConcept, concept_id);
    return it->second;
}

void ColexNetwork::set_community(const std::string& concept_id, std::optional<int> community) {
    nodes_[node_index(concept_id)].community = community;
}

void ColexNetwork::clear_communities() {
    for (auto& node : nodes_) node.community.reset();
}

ColexNetwork build_network(const ColexStore& store, std::size_t min_families) {
    std::vector<ConceptNode> nodes;
    nodes.reserve(store.inventory.size());
    for (const auto& [id, coverage] : store.inventory) {
        nodes.push_back({id, coverage.varieties, coverage.families, std::nullopt});
    }
    std::vector<ColexEdge> edges;
    for (const auto& [pair, attestation] : store.index) {
        if (attestation.families.size() < min_families) continue;
        edges.push_back({pair.a, pair.b, attestation.varieties, attestation.families, attestation.word_count});
    }
    return ColexNetwork(std::move(nodes), std::move(edges), min_families);
}

std::size_t degree(const ColexNetwork& network, const std::string& concept_id) {
    return network.incident_edges(network.node_index(concept_id)).size();
}

std::size_t weighted_degree(const ColexNetwork& network, const std::string& concept_id) {
    std::size_t total = 0;
    for (auto e : network.incident_edges(network.node_index(concept_id))) total += network.edges()[e].weight();
    return total;
}

std::size_t colexified_concepts(const ColexNetwork& network) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < network.nodes().size(); ++i) count += network.incident_edges(i).empty() ? 0 : 1;
    return count;
}

double average_degree(const ColexNetwork& network) {
    const auto colexified = colexified_concepts(network);
    if (colexified == 0) return 0.0;
    return 2.0 * static_cast<double>(network.edges().size()) / static_cast<double>(colexified);
}

double average_weighted_degree(const ColexNetwork& network) {
    const auto colexified = colexified_concepts(network);
    if (colexified == 0) return 0.0;
    const auto total = std::accumulate(network.edges().begin(), network.edges().end(), std::size_t{0},
                                       [](std::size_t sum, const ColexEdge& e) { return sum + e.weight(); });
    return 2.0 * static_cast<double>(total) / static_cast<double>(colexified);
}

}  // namespace colexforge
