#pragma once

#include "colexforge/colexify.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace colexforge {

struct ColexEdge {
    std::string concept_a;  // concept_a < concept_b
    std::string concept_b;
    std::set<std::string> varieties;
    std::set<std::string> families;
    std::size_t word_count = 0;

    /// Edge weight is the number of attesting families.
    std::size_t weight() const { return families.size(); }

    friend bool operator==(const ColexEdge&, const ColexEdge&) = default;
};

struct ConceptNode {
    std::string id;
    std::size_t variety_coverage = 0;
    std::size_t family_coverage = 0;
    std::optional<int> community;

    friend bool operator==(const ConceptNode&, const ConceptNode&) = default;
};

/// Weighted undirected concept graph. Nodes are kept sorted by id and edges by
/// (concept_a, concept_b); there are no self-loops, no parallel edges, and no
/// edge lighter than the family threshold.
class ColexNetwork {
public:
    ColexNetwork() = default;
    /// Validates and sorts; throws InconsistentInputs on any violated invariant.
    ColexNetwork(std::vector<ConceptNode> nodes, std::vector<ColexEdge> edges, std::size_t threshold);

    const std::vector<ConceptNode>& nodes() const { return nodes_; }
    const std::vector<ColexEdge>& edges() const { return edges_; }
    std::size_t threshold() const { return threshold_; }

    bool has_node(const std::string& concept_id) const;
    /// Throws UnknownConcept.
    std::size_t node_index(const std::string& concept_id) const;
    /// Indices into edges() of the edges touching node `index`.
    std::span<const std::size_t> incident_edges(std::size_t index) const { return incidence_[index]; }

    void set_community(const std::string& concept_id, std::optional<int> community);
    void clear_communities();

    friend bool operator==(const ColexNetwork& lhs, const ColexNetwork& rhs) {
        return lhs.threshold_ == rhs.threshold_ && lhs.nodes_ == rhs.nodes_ && lhs.edges_ == rhs.edges_;
    }

private:
    std::vector<ConceptNode> nodes_;
    std::vector<ColexEdge> edges_;
    std::size_t threshold_ = 1;
    std::map<std::string, std::size_t> lookup_;
    std::vector<std::vector<std::size_t>> incidence_;
};

/// One edge per index pair attested in at least `min_families` families; every
/// inventory concept becomes a node, isolated or not.
ColexNetwork build_network(const ColexStore& store, std::size_t min_families = 3);

std::size_t degree(const ColexNetwork& network, const std::string& concept_id);
std::size_t weighted_degree(const ColexNetwork& network, const std::string& concept_id);

/// Nodes with degree >= 1.
std::size_t colexified_concepts(const ColexNetwork& network);

/// Means over colexified concepts; 0 when there are none.
double average_degree(const ColexNetwork& network);
double average_weighted_degree(const ColexNetwork& network);

}  // namespace colexforge
