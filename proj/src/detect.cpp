#include "lakedis/detect.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lakedis {

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

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

const RankedList* apply_cut(const RankedList& ranked, const ReportOptions& opts,
                            RankedList& storage) {
    if (!opts.k || *opts.k >= ranked.entries.size()) return &ranked;
    storage = top_k(ranked, *opts.k);
    return &storage;
}

}  // namespace

RankedList rank(const BipartiteGraph& g, const ScoreTable& scores, const RankOptions& opts) {
    if (scores.value_count == 0 || scores.scores.empty())
        throw std::invalid_argument("rank: empty score table");
    if (scores.value_count != g.value_count() || scores.scores.size() < g.value_count())
        throw std::invalid_argument("rank: score table does not match graph");

    RankedList out;
    out.measure = scores.measure;
    for (NodeId v : rank_order(g, scores)) {
        if (opts.min_attr_degree > 0 && g.degree(v) < opts.min_attr_degree) continue;
        RankedEntry e;
        e.rank = static_cast<uint32_t>(out.entries.size() + 1);
        e.value = g.value_name(v);
        e.score = scores.scores[v];
        out.entries.push_back(std::move(e));
    }
    if (out.entries.empty()) throw std::runtime_error("rank: no candidate value nodes");
    return out;
}

RankedList top_k(const RankedList& ranked, size_t k) {
    if (k < 1 || k > ranked.entries.size())
        throw std::invalid_argument("top_k: k out of range [1, " +
                                    std::to_string(ranked.entries.size()) + "]");
    RankedList out;
    out.measure = ranked.measure;
    out.k_cut = k;
    out.entries.assign(ranked.entries.begin(), ranked.entries.begin() + static_cast<long>(k));
    return out;
}

void write_report_csv(std::ostream& out, const RankedList& ranked, const GroundTruth* gt,
                      const ReportOptions& opts) {
    RankedList storage;
    const RankedList* list = apply_cut(ranked, opts, storage);
    if (opts.include_timestamp) out << "# generated " << utc_timestamp() << '\n';
    out << "# measure " << measure_name(list->measure) << '\n';
    out << (gt ? "rank,value,score,label\n" : "rank,value,score\n");
    for (const auto& e : list->entries) {
        out << e.rank << ',' << csv_escape(e.value) << ',' << format_score(e.score);
        if (gt) out << ',' << (gt->is_homograph(e.value) ? "homograph" : "unambiguous");
        out << '\n';
    }
}

void write_report_json(std::ostream& out, const RankedList& ranked, const GroundTruth* gt,
                       const ReportOptions& opts) {
    RankedList storage;
    const RankedList* list = apply_cut(ranked, opts, storage);
    nlohmann::json j;
    j["measure"] = measure_name(list->measure);
    if (opts.include_timestamp) j["generated"] = utc_timestamp();
    if (list->k_cut) j["k"] = *list->k_cut;
    auto& rows = j["entries"] = nlohmann::json::array();
    for (const auto& e : list->entries) {
        nlohmann::json row{{"rank", e.rank}, {"value", e.value}, {"score", e.score}};
        if (gt) row["label"] = gt->is_homograph(e.value) ? "homograph" : "unambiguous";
        rows.push_back(std::move(row));
    }
    out << j.dump(2) << '\n';
}

RankedList load_report_csv(std::istream& in) {
    RankedList out;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# measure ", 0) == 0)
                out.measure = measure_from_name(line.substr(10));
            continue;
        }
        if (!saw_header && line.rfind("rank,", 0) == 0) {
            saw_header = true;
            continue;
        }
        // rank,value,score[,label] with RFC-4180 quoting on value
        std::vector<std::string> fields;
        std::string field;
        bool in_quotes = false;
        for (size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field.push_back('"');
                        ++i;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    field.push_back(c);
                }
            } else if (c == '"' && field.empty()) {
                in_quotes = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else {
                field.push_back(c);
            }
        }
        fields.push_back(std::move(field));
        if (fields.size() < 3) throw std::runtime_error("report csv: bad row: " + line);
        RankedEntry e;
        e.rank = static_cast<uint32_t>(std::stoul(fields[0]));
        e.value = fields[1];
        e.score = std::stod(fields[2]);
        out.entries.push_back(std::move(e));
    }
    if (out.entries.empty()) throw std::runtime_error("report csv: no entries");
    return out;
}

}  // namespace lakedis
