#include "lakedis/evalkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "csv_util.hpp"
#include "json.hpp"

namespace lakedis {

namespace {

double f1_of(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

EvalReport evaluate(const RankedList& ranked, const GroundTruth& gt,
                    const std::vector<size_t>& ks) {
    if (gt.labels.empty()) throw std::invalid_argument("evaluate: empty ground truth");
    const size_t n = ranked.entries.size();
    if (n == 0) throw std::invalid_argument("evaluate: empty ranking");

    // Prefix hit counts; every ranked value must be labeled.
    std::vector<size_t> hits(n + 1, 0);
    for (size_t i = 0; i < n; ++i) {
        auto it = gt.labels.find(ranked.entries[i].value);
        if (it == gt.labels.end())
            throw std::invalid_argument("evaluate: value not covered by ground truth: " +
                                        ranked.entries[i].value);
        hits[i + 1] = hits[i] + (it->second.homograph ? 1 : 0);
    }

    EvalReport report;
    report.k_star = gt.homograph_count();
    if (report.k_star == 0) throw std::invalid_argument("evaluate: ground truth has no homographs");

    auto point = [&](size_t k) {
        EvalPoint p;
        p.k = k;
        p.precision = static_cast<double>(hits[k]) / static_cast<double>(k);
        p.recall = static_cast<double>(hits[k]) / static_cast<double>(report.k_star);
        p.f1 = f1_of(p.precision, p.recall);
        return p;
    };

    for (size_t k : ks) {
        if (k < 1 || k > n)
            throw std::invalid_argument("evaluate: k out of range: " + std::to_string(k));
        report.curve.push_back(point(k));
    }

    report.best_f1 = point(1);
    for (size_t k = 2; k <= n; ++k) {
        EvalPoint p = point(k);
        if (p.f1 > report.best_f1.f1) report.best_f1 = p;
    }

    // Curve identities hold by construction; check them on every run anyway.
    double last_recall = 0;
    for (size_t k = 1; k <= n; ++k) {
        EvalPoint p = point(k);
        if (p.recall < last_recall) throw std::logic_error("evaluate: recall not monotone");
        last_recall = p.recall;
    }
    if (report.k_star <= n) {
        EvalPoint p = point(report.k_star);
        if (p.precision != p.recall)
            throw std::logic_error("evaluate: precision != recall at k = k_star");
    }
    return report;
}

void EvalReport::save_csv(std::ostream& out) const {
    out << "k,precision,recall,f1\n";
    for (const auto& p : curve)
        out << p.k << ',' << p.precision << ',' << p.recall << ',' << p.f1 << '\n';
}

void EvalReport::save_json(std::ostream& out) const {
    nlohmann::json j;
    j["k_star"] = k_star;
    j["best_f1"] = {{"k", best_f1.k},
                    {"precision", best_f1.precision},
                    {"recall", best_f1.recall},
                    {"f1", best_f1.f1}};
    j["runtime_seconds"] = runtime_seconds;
    if (!params.empty()) j["params"] = nlohmann::json::parse(params);
    auto& rows = j["curve"] = nlohmann::json::array();
    for (const auto& p : curve)
        rows.push_back(
            {{"k", p.k}, {"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}});
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Injection sweeps

namespace {

// One injection run: plant tokens, score by approximate betweenness, return
// the fraction of tokens ranked inside the top-count.
double injection_detection_rate(const Lake& clean_lake, const UnionabilityMap& umap,
                                const InjectionSpec& ispec, const SweepOptions& opts) {
    InjectionResult injected = inject_homographs(clean_lake, umap, ispec, opts.normalize);

    BipartiteGraph g = BipartiteGraph::build(injected.lake, opts.normalize);
    g = prune_singletons(g);
    uint64_t s = std::max<uint64_t>(
        1, static_cast<uint64_t>(std::llround(opts.sample_fraction *
                                              static_cast<double>(g.node_count()))));
    s = std::min<uint64_t>(s, g.node_count());
    ScoreTable scores =
        bc_approx(g, s, Rng::mix(ispec.seed, 0xbcULL), /*normalized=*/true, opts.workers);
    RankedList ranked = top_k(rank(g, scores), ispec.count);

    std::unordered_set<std::string> tokens(injected.tokens.begin(), injected.tokens.end());
    size_t found = 0;
    for (const auto& e : ranked.entries)
        if (tokens.count(e.value)) ++found;
    return static_cast<double>(found) / static_cast<double>(ispec.count);
}

}  // namespace

std::vector<SweepRow> run_cardinality_sweep(const Lake& clean_lake, const UnionabilityMap& umap,
                                            const std::vector<uint32_t>& thresholds,
                                            const std::vector<uint64_t>& seeds,
                                            const SweepOptions& opts) {
    std::vector<SweepRow> rows;
    for (uint32_t threshold : thresholds) {
        SweepRow row;
        row.x = threshold;
        for (uint64_t seed : seeds) {
            InjectionSpec ispec;
            ispec.count = opts.injections;
            ispec.meanings = opts.meanings;
            ispec.min_cardinality = threshold;
            ispec.seed = Rng::mix(seed, threshold);
            row.per_seed.push_back(injection_detection_rate(clean_lake, umap, ispec, opts));
        }
        double sum = 0;
        for (double r : row.per_seed) sum += r;
        row.detection_rate = sum / static_cast<double>(row.per_seed.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> run_meanings_sweep(const Lake& clean_lake, const UnionabilityMap& umap,
                                         const std::vector<uint32_t>& meanings_list,
                                         const std::vector<uint64_t>& seeds,
                                         const SweepOptions& opts) {
    std::vector<SweepRow> rows;
    for (uint32_t meanings : meanings_list) {
        SweepRow row;
        row.x = meanings;
        for (uint64_t seed : seeds) {
            InjectionSpec ispec;
            ispec.count = opts.injections;
            ispec.meanings = meanings;
            ispec.min_cardinality = opts.min_cardinality;
            ispec.seed = Rng::mix(seed, 1000 + meanings);
            row.per_seed.push_back(injection_detection_rate(clean_lake, umap, ispec, opts));
        }
        double sum = 0;
        for (double r : row.per_seed) sum += r;
        row.detection_rate = sum / static_cast<double>(row.per_seed.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Sampling and scaling studies

std::vector<SamplingRow> run_sampling_study(const BipartiteGraph& g, const GroundTruth& gt,
                                            const std::vector<uint64_t>& sample_sizes,
                                            const std::vector<uint64_t>& seeds, int workers) {
    size_t k_star = gt.homograph_count();
    std::vector<SamplingRow> rows;
    for (uint64_t s : sample_sizes) {
        SamplingRow row;
        row.sample_size = s;
        double psum = 0, tsum = 0;
        for (uint64_t seed : seeds) {
            auto t0 = std::chrono::steady_clock::now();
            ScoreTable scores = bc_approx(g, s, seed, true, workers);
            tsum += seconds_since(t0);
            RankedList ranked = rank(g, scores);
            EvalReport rep = evaluate(ranked, gt, {std::min(k_star, ranked.entries.size())});
            psum += rep.curve.front().precision;
        }
        row.precision = psum / static_cast<double>(seeds.size());
        row.runtime_seconds = tsum / static_cast<double>(seeds.size());
        rows.push_back(row);
    }
    return rows;
}

std::vector<ScalingRow> run_scaling_study(const std::vector<BipartiteGraph>& graphs,
                                          double s_fraction, uint64_t seed, int workers) {
    std::vector<ScalingRow> rows;
    for (const auto& g : graphs) {
        uint64_t s = std::max<uint64_t>(
            1, static_cast<uint64_t>(
                   std::llround(s_fraction * static_cast<double>(g.node_count()))));
        s = std::min<uint64_t>(s, g.node_count());
        auto t0 = std::chrono::steady_clock::now();
        ScoreTable scores = bc_approx(g, s, seed, true, workers);
        (void)scores;
        rows.push_back({g.edge_count(), seconds_since(t0)});
    }
    return rows;
}

LinearFit linear_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("linear_fit: need at least 2 points");
    double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : points) {
        sx += x;
        sy += y;
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    LinearFit fit;
    if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate x values");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (auto [x, y] : points) {
        double e = y - (fit.intercept + fit.slope * x);
        ss_res += e * e;
    }
    fit.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

void write_sweep_csv(std::ostream& out, const std::string& x_name,
                     const std::vector<SweepRow>& rows) {
    out << x_name << ",detection_rate";
    if (!rows.empty())
        for (size_t i = 0; i < rows.front().per_seed.size(); ++i) out << ",seed" << i;
    out << '\n';
    for (const auto& r : rows) {
        out << r.x << ',' << r.detection_rate;
        for (double v : r.per_seed) out << ',' << v;
        out << '\n';
    }
}

}  // namespace lakedis
