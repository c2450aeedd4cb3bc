#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lakedis/graph.hpp"

namespace lakedis {

enum class Measure {
    lcc,       // mean pairwise Jaccard over value neighborhoods, per value node
    lcc_attr,  // variant: Jaccard over attribute sets instead of neighborhoods
    bc_exact,
    bc_approx,
};

std::string measure_name(Measure m);
Measure measure_from_name(const std::string& name);
// Low scores first for clustering-coefficient measures, high first for
// betweenness.
bool ranks_ascending(Measure m);

struct ScoreParams {
    std::optional<uint64_t> sample_size;
    std::optional<uint64_t> seed;
    bool normalized = true;
};

struct ScoreTable {
    Measure measure = Measure::lcc;
    ScoreParams params;
    size_t value_count = 0;      // leading node ids are value nodes
    std::vector<double> scores;  // indexed by node id; LCC tables cover values only

    double score(NodeId id) const { return scores.at(id); }
};

// Jaccard similarity of N(v) and N(w); 0 when both neighborhoods are empty.
// v and w must be distinct value nodes.
double pairwise_cc(const BipartiteGraph& g, NodeId v, NodeId w);

// Mean of pairwise_cc(u, v) over v in N(u); 0 for an empty neighborhood.
double lcc(const BipartiteGraph& g, NodeId u);

// Attribute-set variant of the above pair score: Jaccard of the attribute
// sets of v and w.
double pairwise_cc_attr(const BipartiteGraph& g, NodeId v, NodeId w);
double lcc_attr(const BipartiteGraph& g, NodeId u);

ScoreTable lcc_all(const BipartiteGraph& g, bool attr_variant = false, int workers = 0);

// Brandes over every node (both partitions serve as path endpoints; pairs
// with no connecting path contribute zero). Unordered pairs counted once;
// normalization divides by (N-1)(N-2)/2.
ScoreTable bc_exact(const BipartiteGraph& g, bool normalized = true, int workers = 0);

// Pivot-sampled betweenness: dependency accumulation from sample_size pivots
// drawn uniformly without replacement, scaled by N/s. sample_size == N
// reproduces bc_exact up to floating-point reassociation. Deterministic for a
// fixed seed, independent of worker count.
ScoreTable bc_approx(const BipartiteGraph& g, uint64_t sample_size, uint64_t seed,
                     bool normalized = true, int workers = 0);

// Value-node ids in rank order for a score table: ascending or descending by
// the measure's direction, ties broken by value string.
std::vector<NodeId> rank_order(const BipartiteGraph& g, const ScoreTable& t);

// (value,score) rows in rank order; params echoed in the JSON variant.
void write_scores_csv(std::ostream& out, const BipartiteGraph& g, const ScoreTable& t);
void write_scores_json(std::ostream& out, const BipartiteGraph& g, const ScoreTable& t);

}  // namespace lakedis
