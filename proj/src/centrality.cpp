#include "lakedis/centrality.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "lakedis/parallel.hpp"
#include "lakedis/rng.hpp"
#include "json.hpp"

namespace lakedis {

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::lcc: return "lcc";
        case Measure::lcc_attr: return "lcc-attr";
        case Measure::bc_exact: return "bc-exact";
        case Measure::bc_approx: return "bc-approx";
    }
    return "?";
}

Measure measure_from_name(const std::string& name) {
    if (name == "lcc") return Measure::lcc;
    if (name == "lcc-attr") return Measure::lcc_attr;
    if (name == "bc-exact") return Measure::bc_exact;
    if (name == "bc-approx") return Measure::bc_approx;
    throw std::invalid_argument("unknown measure: " + name);
}

bool ranks_ascending(Measure m) {
    return m == Measure::lcc || m == Measure::lcc_attr;
}

// ---------------------------------------------------------------------------
// Clustering coefficients

namespace {

// Epoch-stamped scratch: marking and membership tests without per-call clears.
struct LccScratch {
    std::vector<uint32_t> mark;  // stamped for members of the center's N(u)
    std::vector<uint32_t> seen;  // stamped while materializing one N(v)
    uint32_t epoch = 0;

    void ensure(size_t n_values) {
        if (mark.size() < n_values) {
            mark.assign(n_values, 0);
            seen.assign(n_values, 0);
            epoch = 0;
        }
        if (epoch > UINT32_MAX - 8) {
            std::fill(mark.begin(), mark.end(), 0);
            std::fill(seen.begin(), seen.end(), 0);
            epoch = 0;
        }
    }
};

thread_local LccScratch tl_lcc;

void collect_neighbors(const BipartiteGraph& g, NodeId u, LccScratch& s,
                       std::vector<NodeId>& out) {
    out.clear();
    const uint32_t e = ++s.epoch;
    for (NodeId a : g.neighbors(u)) {
        for (NodeId w : g.neighbors(a)) {
            if (w == u) continue;
            if (s.seen[w] != e) {
                s.seen[w] = e;
                out.push_back(w);
            }
        }
    }
    std::sort(out.begin(), out.end());
}

// |N(u) cap N(v)| with N(u) pre-marked at epoch `mark_epoch`; also returns
// |N(v)| via out-parameter. Single pass over v's attribute lists.
size_t intersect_neighborhood(const BipartiteGraph& g, NodeId v, LccScratch& s,
                              uint32_t mark_epoch, size_t& nv_size) {
    const uint32_t e = ++s.epoch;
    size_t inter = 0;
    nv_size = 0;
    for (NodeId a : g.neighbors(v)) {
        for (NodeId w : g.neighbors(a)) {
            if (w == v) continue;
            if (s.seen[w] != e) {
                s.seen[w] = e;
                ++nv_size;
                if (s.mark[w] == mark_epoch) ++inter;
            }
        }
    }
    return inter;
}

void require_value_node(const BipartiteGraph& g, NodeId v, const char* what) {
    if (!g.is_value_node(v))
        throw std::invalid_argument(std::string(what) + ": node is not a value node");
}

double lcc_of(const BipartiteGraph& g, NodeId u, LccScratch& s, std::vector<NodeId>& nu) {
    s.ensure(g.value_count());
    collect_neighbors(g, u, s, nu);
    if (nu.empty()) return 0.0;

    const uint32_t me = ++s.epoch;
    for (NodeId w : nu) s.mark[w] = me;

    double sum = 0.0;
    for (NodeId v : nu) {  // ascending
        size_t nv = 0;
        size_t inter = intersect_neighborhood(g, v, s, me, nv);
        size_t uni = nu.size() + nv - inter;
        sum += static_cast<double>(inter) / static_cast<double>(uni);
    }
    return sum / static_cast<double>(nu.size());
}

// Jaccard of two sorted id spans.
double jaccard_sorted(std::span<const NodeId> a, std::span<const NodeId> b) {
    size_t i = 0, j = 0, inter = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else { ++inter; ++i; ++j; }
    }
    size_t uni = a.size() + b.size() - inter;
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double lcc_attr_of(const BipartiteGraph& g, NodeId u, LccScratch& s, std::vector<NodeId>& nu) {
    s.ensure(g.value_count());
    collect_neighbors(g, u, s, nu);
    if (nu.empty()) return 0.0;
    double sum = 0.0;
    for (NodeId v : nu) sum += jaccard_sorted(g.neighbors(u), g.neighbors(v));
    return sum / static_cast<double>(nu.size());
}

}  // namespace

double pairwise_cc(const BipartiteGraph& g, NodeId v, NodeId w) {
    require_value_node(g, v, "pairwise_cc");
    require_value_node(g, w, "pairwise_cc");
    if (v == w) throw std::invalid_argument("pairwise_cc: nodes must be distinct");
    LccScratch& s = tl_lcc;
    s.ensure(g.value_count());

    std::vector<NodeId> nv;
    collect_neighbors(g, v, s, nv);
    const uint32_t me = ++s.epoch;
    for (NodeId x : nv) s.mark[x] = me;
    size_t nw = 0;
    size_t inter = intersect_neighborhood(g, w, s, me, nw);
    size_t uni = nv.size() + nw - inter;
    if (uni == 0) return 0.0;  // both neighborhoods empty
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double lcc(const BipartiteGraph& g, NodeId u) {
    require_value_node(g, u, "lcc");
    std::vector<NodeId> nu;
    return lcc_of(g, u, tl_lcc, nu);
}

double pairwise_cc_attr(const BipartiteGraph& g, NodeId v, NodeId w) {
    require_value_node(g, v, "pairwise_cc_attr");
    require_value_node(g, w, "pairwise_cc_attr");
    if (v == w) throw std::invalid_argument("pairwise_cc_attr: nodes must be distinct");
    return jaccard_sorted(g.neighbors(v), g.neighbors(w));
}

double lcc_attr(const BipartiteGraph& g, NodeId u) {
    require_value_node(g, u, "lcc_attr");
    std::vector<NodeId> nu;
    return lcc_attr_of(g, u, tl_lcc, nu);
}

ScoreTable lcc_all(const BipartiteGraph& g, bool attr_variant, int workers) {
    ScoreTable t;
    t.measure = attr_variant ? Measure::lcc_attr : Measure::lcc;
    t.value_count = g.value_count();
    t.scores.assign(g.value_count(), 0.0);
    parallel_for(g.value_count(), workers, [&](size_t u) {
        std::vector<NodeId> nu;
        NodeId id = static_cast<NodeId>(u);
        t.scores[u] = attr_variant ? lcc_attr_of(g, id, tl_lcc, nu) : lcc_of(g, id, tl_lcc, nu);
    });
    return t;
}

// ---------------------------------------------------------------------------
// Betweenness

namespace {

struct BrandesScratch {
    std::vector<int32_t> dist;
    std::vector<double> sigma;
    std::vector<double> delta;
    std::vector<NodeId> order;  // BFS visit order; doubles as the queue

    void ensure(size_t n) {
        if (dist.size() < n) {
            dist.assign(n, -1);
            sigma.assign(n, 0.0);
            delta.assign(n, 0.0);
        }
        order.reserve(n);
    }
};

thread_local BrandesScratch tl_brandes;

// One source of Brandes' algorithm; adds the source's dependencies into out.
void accumulate_source(const BipartiteGraph& g, NodeId s, BrandesScratch& sc,
                       std::vector<double>& out) {
    sc.order.clear();
    sc.dist[s] = 0;
    sc.sigma[s] = 1.0;
    sc.order.push_back(s);

    for (size_t head = 0; head < sc.order.size(); ++head) {
        NodeId v = sc.order[head];
        int32_t dv = sc.dist[v];
        double sv = sc.sigma[v];
        for (NodeId w : g.neighbors(v)) {
            if (sc.dist[w] < 0) {
                sc.dist[w] = dv + 1;
                sc.order.push_back(w);
            }
            if (sc.dist[w] == dv + 1) sc.sigma[w] += sv;
        }
    }

    for (size_t i = sc.order.size(); i-- > 1;) {
        NodeId w = sc.order[i];
        double coeff = (1.0 + sc.delta[w]) / sc.sigma[w];
        int32_t dw = sc.dist[w];
        for (NodeId v : g.neighbors(w))
            if (sc.dist[v] == dw - 1) sc.delta[v] += sc.sigma[v] * coeff;
    }

    for (size_t i = 1; i < sc.order.size(); ++i) out[sc.order[i]] += sc.delta[sc.order[i]];
    for (NodeId v : sc.order) {
        sc.dist[v] = -1;
        sc.sigma[v] = 0.0;
        sc.delta[v] = 0.0;
    }
}

constexpr size_t kSourcesPerChunk = 64;

ScoreTable run_brandes(const BipartiteGraph& g, const std::vector<NodeId>& sources, double scale,
                       bool normalized, int workers, Measure measure, ScoreParams params) {
    const size_t n_total = g.node_count();
    const size_t chunk_count = (sources.size() + kSourcesPerChunk - 1) / kSourcesPerChunk;

    ScoreTable t;
    t.measure = measure;
    t.params = params;
    t.value_count = g.value_count();
    ordered_chunk_reduce(
        chunk_count, workers, n_total,
        [&](size_t c, std::vector<double>& local) {
            BrandesScratch& sc = tl_brandes;
            sc.ensure(n_total);
            size_t begin = c * kSourcesPerChunk;
            size_t end = std::min(sources.size(), begin + kSourcesPerChunk);
            for (size_t i = begin; i < end; ++i) accumulate_source(g, sources[i], sc, local);
        },
        t.scores);

    // Each unordered pair is seen from both endpoints' dependencies.
    double factor = scale * 0.5;
    if (normalized && n_total >= 3) {
        factor /= static_cast<double>(n_total - 1) * static_cast<double>(n_total - 2) / 2.0;
    }
    for (double& x : t.scores) x *= factor;
    return t;
}

}  // namespace

ScoreTable bc_exact(const BipartiteGraph& g, bool normalized, int workers) {
    std::vector<NodeId> sources(g.node_count());
    for (size_t i = 0; i < sources.size(); ++i) sources[i] = static_cast<NodeId>(i);
    ScoreParams params;
    params.normalized = normalized;
    return run_brandes(g, sources, 1.0, normalized, workers, Measure::bc_exact, params);
}

ScoreTable bc_approx(const BipartiteGraph& g, uint64_t sample_size, uint64_t seed,
                     bool normalized, int workers) {
    const uint64_t n_total = g.node_count();
    if (sample_size == 0) throw std::invalid_argument("bc_approx: sample size must be >= 1");
    if (sample_size > n_total)
        throw std::invalid_argument("bc_approx: sample size exceeds node count");

    Rng rng(seed);
    auto picks = rng.sample_without_replacement(static_cast<uint32_t>(n_total),
                                                static_cast<uint32_t>(sample_size));
    std::vector<NodeId> pivots(picks.begin(), picks.end());

    ScoreParams params;
    params.sample_size = sample_size;
    params.seed = seed;
    params.normalized = normalized;
    double scale = static_cast<double>(n_total) / static_cast<double>(sample_size);
    return run_brandes(g, pivots, scale, normalized, workers, Measure::bc_approx, params);
}

// ---------------------------------------------------------------------------
// Ranking order and serialization

std::vector<NodeId> rank_order(const BipartiteGraph& g, const ScoreTable& t) {
    std::vector<NodeId> ids(g.value_count());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
    const bool asc = ranks_ascending(t.measure);
    std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
        double sa = t.scores[a], sb = t.scores[b];
        if (sa != sb) return asc ? sa < sb : sa > sb;
        return g.value_name(a) < g.value_name(b);
    });
    return ids;
}

namespace {

std::string format_score(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

nlohmann::json params_json(const ScoreTable& t) {
    nlohmann::json p;
    p["measure"] = measure_name(t.measure);
    p["normalized"] = t.params.normalized;
    if (t.params.sample_size) p["sample_size"] = *t.params.sample_size;
    if (t.params.seed) p["seed"] = *t.params.seed;
    return p;
}

}  // namespace

void write_scores_csv(std::ostream& out, const BipartiteGraph& g, const ScoreTable& t) {
    out << "value,score\n";
    for (NodeId v : rank_order(g, t))
        out << csv_escape(g.value_name(v)) << ',' << format_score(t.scores[v]) << '\n';
}

void write_scores_json(std::ostream& out, const BipartiteGraph& g, const ScoreTable& t) {
    nlohmann::json j;
    j["params"] = params_json(t);
    auto& rows = j["scores"] = nlohmann::json::array();
    for (NodeId v : rank_order(g, t))
        rows.push_back({{"value", g.value_name(v)}, {"score", t.scores[v]}});
    out << j.dump(2) << '\n';
}

}  // namespace lakedis
