#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lakedis/benchgen.hpp"
#include "lakedis/detect.hpp"

namespace lakedis {

struct EvalPoint {
    size_t k = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

struct EvalReport {
    std::vector<EvalPoint> curve;
    size_t k_star = 0;  // true homograph count
    EvalPoint best_f1;  // over all k, not just the requested ones
    double runtime_seconds = 0;
    std::string params;  // JSON echo of run parameters

    void save_csv(std::ostream& out) const;
    void save_json(std::ostream& out) const;
};

// Precision/recall/F1 at each requested k. Every ranked value must be labeled
// in the ground truth; recall is relative to the total homograph count.
// Checks the curve identities (recall monotone; precision == recall at
// k == k_star) on every run.
EvalReport evaluate(const RankedList& ranked, const GroundTruth& gt,
                    const std::vector<size_t>& ks);

struct SweepOptions {
    uint32_t injections = 50;
    uint32_t meanings = 2;          // cardinality sweep
    uint32_t min_cardinality = 500; // meanings sweep
    double sample_fraction = 0.03;  // pivots for the approximate scorer
    int workers = 0;
    NormalizeOptions normalize;
};

struct SweepRow {
    double x = 0;               // threshold or meaning count
    double detection_rate = 0;  // mean over seeds of |top-k hits| / injections
    std::vector<double> per_seed;
};

// Injects `injections` homographs into a clean lake at each cardinality
// threshold and reports the fraction landing in the betweenness top-k
// (k = injections), averaged over seeds.
std::vector<SweepRow> run_cardinality_sweep(const Lake& clean_lake, const UnionabilityMap& umap,
                                            const std::vector<uint32_t>& thresholds,
                                            const std::vector<uint64_t>& seeds,
                                            const SweepOptions& opts = {});

// Same protocol with the cardinality threshold fixed and the number of
// meanings varied.
std::vector<SweepRow> run_meanings_sweep(const Lake& clean_lake, const UnionabilityMap& umap,
                                         const std::vector<uint32_t>& meanings_list,
                                         const std::vector<uint64_t>& seeds,
                                         const SweepOptions& opts = {});

struct SamplingRow {
    uint64_t sample_size = 0;
    double precision = 0;        // at k_star, mean over seeds
    double runtime_seconds = 0;  // scoring only, mean over seeds
};

std::vector<SamplingRow> run_sampling_study(const BipartiteGraph& g, const GroundTruth& gt,
                                            const std::vector<uint64_t>& sample_sizes,
                                            const std::vector<uint64_t>& seeds, int workers = 0);

struct ScalingRow {
    size_t edges = 0;
    double runtime_seconds = 0;
};

// Times the approximate scorer on each subgraph with s = s_fraction * nodes.
std::vector<ScalingRow> run_scaling_study(const std::vector<BipartiteGraph>& graphs,
                                          double s_fraction, uint64_t seed, int workers = 0);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

LinearFit linear_fit(const std::vector<std::pair<double, double>>& points);

void write_sweep_csv(std::ostream& out, const std::string& x_name,
                     const std::vector<SweepRow>& rows);

}  // namespace lakedis
