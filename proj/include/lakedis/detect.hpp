#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lakedis/benchgen.hpp"
#include "lakedis/centrality.hpp"
#include "lakedis/graph.hpp"

namespace lakedis {

struct RankedEntry {
    uint32_t rank = 0;  // 1-based
    std::string value;
    double score = 0;
};

struct RankedList {
    Measure measure = Measure::bc_exact;
    std::vector<RankedEntry> entries;
    std::optional<size_t> k_cut;
};

struct RankOptions {
    // Keep only values appearing in at least this many attributes. The
    // pruned pipeline already guarantees 2; this matters on unpruned graphs.
    size_t min_attr_degree = 0;
};

// Total order over value nodes: ascending score for clustering-coefficient
// measures, descending for betweenness, ties broken by value string.
// Attribute-node scores are dropped. Throws when no candidate remains.
RankedList rank(const BipartiteGraph& g, const ScoreTable& scores,
                const RankOptions& opts = {});

// Prefix of length k, 1 <= k <= entries.
RankedList top_k(const RankedList& ranked, size_t k);

struct ReportOptions {
    bool include_timestamp = true;
    std::optional<size_t> k;  // cut applied before writing
};

// rank,value,score[,label] rows; label joined from ground truth when given.
void write_report_csv(std::ostream& out, const RankedList& ranked,
                      const GroundTruth* gt = nullptr, const ReportOptions& opts = {});
void write_report_json(std::ostream& out, const RankedList& ranked,
                       const GroundTruth* gt = nullptr, const ReportOptions& opts = {});

// Reads back a CSV report (rank/value/score columns).
RankedList load_report_csv(std::istream& in);

}  // namespace lakedis
