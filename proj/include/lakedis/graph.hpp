#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lakedis/rng.hpp"
#include "lakedis/types.hpp"

namespace lakedis {

using NodeId = uint32_t;

struct AttributeInfo {
    AttributeId id;
    std::optional<std::string> display_name;
};

struct ValueNeighborhood {
    NodeId center = 0;
    std::vector<NodeId> neighbors;  // sorted value-node ids, center excluded
    size_t cardinality() const { return neighbors.size(); }
};

struct GraphStats {
    size_t value_nodes = 0;
    size_t attribute_nodes = 0;
    size_t edges = 0;
    std::map<size_t, size_t> value_degree_hist;      // attribute-degree -> count
    std::map<size_t, size_t> attribute_degree_hist;  // #distinct values -> count
    size_t min_attribute_cardinality = 0;
    size_t max_attribute_cardinality = 0;
};

// The value/attribute co-occurrence graph. Node ids are dense and unified:
// values occupy [0, value_count()), attributes [value_count(), node_count()).
// Ids are canonical (values sorted by string, attributes by (table, column)),
// so the same lake always builds the same graph. Immutable once built.
class BipartiteGraph {
  public:
    BipartiteGraph() = default;

    // One node per distinct normalized value, one per attribute with at least
    // one non-missing cell, one edge per distinct (value, attribute) incidence.
    // Throws if no column holds a value after normalization.
    static BipartiteGraph build(const Lake& lake, const NormalizeOptions& opts = {});

    // Assembles a graph from explicit parts (tests, snapshot loading).
    // Edges are (value_index, attribute_index) pairs; duplicates are merged.
    static BipartiteGraph from_incidences(std::vector<std::string> values,
                                          std::vector<AttributeInfo> attributes,
                                          std::vector<std::pair<uint32_t, uint32_t>> edges);

    size_t value_count() const { return n_values_; }
    size_t attribute_count() const { return attributes_.size(); }
    size_t node_count() const { return n_values_ + attributes_.size(); }
    size_t edge_count() const { return edges_; }

    bool is_value_node(NodeId id) const { return id < n_values_; }
    std::span<const NodeId> neighbors(NodeId id) const;
    size_t degree(NodeId id) const { return neighbors(id).size(); }

    const std::string& value_name(NodeId value_node) const;
    const AttributeInfo& attribute(NodeId attribute_node) const;
    NodeId attribute_node(size_t attribute_index) const {
        return static_cast<NodeId>(n_values_ + attribute_index);
    }
    // Value node for a normalized string, if present.
    std::optional<NodeId> find_value(std::string_view normalized) const;

    // N(v): all values sharing at least one attribute with v.
    // Throws if v is an attribute node.
    ValueNeighborhood value_neighbors(NodeId v) const;

    GraphStats stats() const;

    // Text snapshot (node dictionaries + edge list); load(save(g)) == g.
    void save(std::ostream& out) const;
    static BipartiteGraph load(std::istream& in);

    // Induced subgraph grown by repeatedly picking a random attribute node and
    // taking all its values, until the edge count reaches target_edges (or
    // attributes run out). Used by scaling studies.
    BipartiteGraph attribute_sample(size_t target_edges, Rng& rng) const;

    bool operator==(const BipartiteGraph& other) const;

  private:
    size_t n_values_ = 0;
    size_t edges_ = 0;
    bool values_sorted_ = true;
    std::vector<std::string> values_;        // id order == lexicographic order when built
    std::vector<AttributeInfo> attributes_;  // id order == (table, column) order
    std::vector<uint64_t> offsets_;          // CSR over all nodes
    std::vector<NodeId> adjacency_;          // sorted within each node

    void finalize(std::vector<std::pair<uint32_t, uint32_t>>& edges);
};

// Drops value nodes that appear in fewer than two attributes, then attribute
// nodes left without values. Runs before scoring: a value seen once cannot be
// a homograph candidate.
BipartiteGraph prune_singletons(const BipartiteGraph& g);

}  // namespace lakedis
