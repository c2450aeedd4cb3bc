#include "lakedis/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "csv_util.hpp"
#include "lakedis/ingest.hpp"
#include "lakedis/rng.hpp"
#include "json.hpp"

namespace lakedis {

// ---------------------------------------------------------------------------
// UnionabilityMap / GroundTruth

uint32_t UnionabilityMap::class_of(const AttributeId& a) const {
    auto it = classes.find(a);
    if (it == classes.end())
        throw std::runtime_error("unionability map: attribute not covered: " + a.to_string());
    return it->second;
}

uint32_t UnionabilityMap::class_count() const {
    std::set<uint32_t> ids;
    for (const auto& [_, c] : classes) ids.insert(c);
    return static_cast<uint32_t>(ids.size());
}

void UnionabilityMap::save_json(std::ostream& out) const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [a, c] : classes)
        rows.push_back({{"table", a.table}, {"column", a.column_index}, {"class", c}});
    out << nlohmann::json{{"attributes", rows}}.dump(2) << '\n';
}

UnionabilityMap UnionabilityMap::load_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    UnionabilityMap m;
    for (const auto& row : j.at("attributes"))
        m.classes[{row.at("table").get<std::string>(), row.at("column").get<uint32_t>()}] =
            row.at("class").get<uint32_t>();
    return m;
}

size_t GroundTruth::homograph_count() const {
    size_t k = 0;
    for (const auto& [_, e] : labels)
        if (e.homograph) ++k;
    return k;
}

bool GroundTruth::is_homograph(const std::string& value) const {
    auto it = labels.find(value);
    return it != labels.end() && it->second.homograph;
}

void GroundTruth::save_csv(std::ostream& out) const {
    out << "value,label,meanings\n";
    for (const auto& [v, e] : labels)
        out << detail::csv_escape(v) << ',' << (e.homograph ? "homograph" : "unambiguous") << ','
            << e.meanings << '\n';
}

GroundTruth GroundTruth::load_csv(std::istream& in) {
    GroundTruth gt;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("value,", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 3) throw std::runtime_error("ground truth csv: bad row: " + line);
        Entry e;
        e.homograph = fields[1] == "homograph";
        e.meanings = static_cast<uint32_t>(std::stoul(fields[2]));
        gt.labels[fields[0]] = e;
    }
    if (gt.labels.empty()) throw std::runtime_error("ground truth csv: empty");
    return gt;
}

GroundTruth label_homographs(const Lake& lake, const UnionabilityMap& umap,
                             const NormalizeOptions& opts) {
    std::unordered_map<std::string, std::vector<uint32_t>> value_classes;
    for (const auto& t : lake.tables) {
        for (size_t j = 0; j < t.columns.size(); ++j) {
            uint32_t cls = umap.class_of({t.source_id, static_cast<uint32_t>(j)});
            for (const auto& cell : t.columns[j].cells) {
                auto v = normalize_value(cell, opts);
                if (!v) continue;
                auto& cs = value_classes[*v];
                if (std::find(cs.begin(), cs.end(), cls) == cs.end()) cs.push_back(cls);
            }
        }
    }
    GroundTruth gt;
    for (auto& [v, cs] : value_classes) {
        GroundTruth::Entry e;
        e.meanings = static_cast<uint32_t>(cs.size());
        e.homograph = cs.size() >= 2;
        gt.labels[v] = e;
    }
    return gt;
}

// ---------------------------------------------------------------------------
// Generator

namespace {

std::string pool_token(uint32_t pool, uint32_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "D%u_V%u", pool, index);
    return buf;
}

std::string planted_token(size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "H%03zu", index);
    return buf;
}

size_t column_draw(const ColumnSpec& c, size_t pool_size) {
    auto d = static_cast<size_t>(std::llround(c.coverage * static_cast<double>(pool_size)));
    return std::min(pool_size, std::max<size_t>(1, d));
}

}  // namespace

void GeneratorSpec::validate() const {
    if (pools.empty()) throw std::invalid_argument("generator spec: no pools");
    if (tables.empty()) throw std::invalid_argument("generator spec: no tables");
    for (size_t p = 0; p < pools.size(); ++p)
        if (pools[p].size == 0)
            throw std::invalid_argument("generator spec: pool " + std::to_string(p) + " is empty");

    std::vector<size_t> planted_per_pool(pools.size(), 0);
    for (size_t h = 0; h < planted.size(); ++h) {
        const auto& ph = planted[h];
        if (ph.pools.size() < 2)
            throw std::invalid_argument("generator spec: planted homograph " + std::to_string(h) +
                                        " needs at least 2 pools");
        std::set<uint32_t> distinct(ph.pools.begin(), ph.pools.end());
        if (distinct.size() != ph.pools.size())
            throw std::invalid_argument("generator spec: planted homograph " + std::to_string(h) +
                                        " repeats a pool");
        for (uint32_t p : ph.pools) {
            if (p >= pools.size())
                throw std::invalid_argument("generator spec: planted homograph " +
                                            std::to_string(h) + " references pool " +
                                            std::to_string(p) + " which does not exist");
            ++planted_per_pool[p];
        }
    }

    std::vector<char> pool_used(pools.size(), 0);
    for (size_t t = 0; t < tables.size(); ++t) {
        const auto& table = tables[t];
        if (table.rows == 0 || table.columns.empty())
            throw std::invalid_argument("generator spec: table " + table.name +
                                        " needs rows and columns");
        for (const auto& col : table.columns) {
            if (col.pool >= pools.size())
                throw std::invalid_argument("generator spec: table " + table.name +
                                            " references pool " + std::to_string(col.pool) +
                                            " which does not exist");
            if (col.coverage <= 0.0 || col.coverage > 1.0)
                throw std::invalid_argument("generator spec: coverage must be in (0,1]");
            size_t need = column_draw(col, pools[col.pool].size) + planted_per_pool[col.pool];
            if (need > table.rows)
                throw std::invalid_argument(
                    "generator spec: table " + table.name + " has " + std::to_string(table.rows) +
                    " rows but a column needs " + std::to_string(need) + " distinct values");
            pool_used[col.pool] = 1;
        }
    }
    for (const auto& ph : planted)
        for (uint32_t p : ph.pools)
            if (!pool_used[p])
                throw std::invalid_argument("generator spec: planted pool " + std::to_string(p) +
                                            " is not used by any column");
}

GeneratedLake generate_lake(const GeneratorSpec& spec) {
    spec.validate();
    const size_t P = spec.pools.size();

    std::vector<std::vector<std::string>> base_values(P);
    for (size_t p = 0; p < P; ++p) {
        base_values[p].reserve(spec.pools[p].size);
        for (uint32_t i = 0; i < spec.pools[p].size; ++i)
            base_values[p].push_back(pool_token(static_cast<uint32_t>(p), i));
    }
    std::vector<std::vector<std::string>> planted_in_pool(P);
    std::vector<std::string> planted_tokens;
    for (size_t h = 0; h < spec.planted.size(); ++h) {
        std::string tok = planted_token(h);
        planted_tokens.push_back(tok);
        for (uint32_t p : spec.planted[h].pools) planted_in_pool[p].push_back(tok);
    }

    Rng rng(spec.seed);
    Lake lake;
    UnionabilityMap umap;
    for (const auto& tspec : spec.tables) {
        RawTable table;
        table.source_id = tspec.name;
        table.has_header = true;
        for (size_t j = 0; j < tspec.columns.size(); ++j) {
            const ColumnSpec& cspec = tspec.columns[j];
            const auto& base = base_values[cspec.pool];
            size_t draw = column_draw(cspec, base.size());

            std::vector<std::string> cover = planted_in_pool[cspec.pool];
            if (cspec.mode == SampleMode::uniform) {
                auto idx = rng.sample_without_replacement(static_cast<uint32_t>(base.size()),
                                                          static_cast<uint32_t>(draw));
                for (uint32_t k : idx) cover.push_back(base[k]);
            } else {
                size_t start = rng.below(base.size() - draw + 1);
                for (size_t k = 0; k < draw; ++k) cover.push_back(base[start + k]);
            }

            Column col;
            col.display_name = tspec.name + "_c" + std::to_string(j);
            col.cells.reserve(tspec.rows);
            for (uint32_t r = 0; r < tspec.rows; ++r) col.cells.push_back(cover[r % cover.size()]);
            rng.shuffle(col.cells);
            table.columns.push_back(std::move(col));

            umap.classes[{tspec.name, static_cast<uint32_t>(j)}] = cspec.pool;
        }
        lake.tables.push_back(std::move(table));
    }

    GroundTruth gt = label_homographs(lake, umap);

    // The plan is the contract: exactly the planted tokens, with their pool
    // counts as meanings, may be homographs.
    size_t found = 0;
    for (size_t h = 0; h < spec.planted.size(); ++h) {
        auto it = gt.labels.find(planted_tokens[h]);
        if (it == gt.labels.end() || !it->second.homograph ||
            it->second.meanings != spec.planted[h].pools.size())
            throw std::logic_error("generator: planted homograph " + planted_tokens[h] +
                                   " missing from derived ground truth");
        ++found;
    }
    if (gt.homograph_count() != found)
        throw std::logic_error("generator: derived ground truth has unplanned homographs");

    return {std::move(lake), std::move(umap), std::move(gt)};
}

// ---------------------------------------------------------------------------
// Homograph removal

Lake remove_homographs(const Lake& lake, const UnionabilityMap& umap, const GroundTruth& gt,
                       const NormalizeOptions& opts) {
    std::unordered_set<std::string> used;
    for (const auto& t : lake.tables)
        for (const auto& col : t.columns)
            for (const auto& cell : col.cells)
                if (auto v = normalize_value(cell, opts)) used.insert(std::move(*v));

    std::unordered_map<std::string, std::string> replacement;  // "value\x1fclass" -> token
    auto fresh_token = [&](const std::string& value, uint32_t cls) -> const std::string& {
        std::string key = value + '\x1f' + std::to_string(cls);
        auto it = replacement.find(key);
        if (it != replacement.end()) return it->second;
        std::string base = value + "__M" + std::to_string(cls);
        std::string candidate = base;
        for (uint64_t salt = 0; used.count(candidate); ++salt)
            candidate = base + "X" + std::to_string(salt);
        used.insert(candidate);
        return replacement.emplace(std::move(key), std::move(candidate)).first->second;
    };

    Lake out = lake;
    for (auto& t : out.tables) {
        for (size_t j = 0; j < t.columns.size(); ++j) {
            uint32_t cls = umap.class_of({t.source_id, static_cast<uint32_t>(j)});
            for (auto& cell : t.columns[j].cells) {
                auto v = normalize_value(cell, opts);
                if (!v) continue;
                auto it = gt.labels.find(*v);
                if (it != gt.labels.end() && it->second.homograph) cell = fresh_token(*v, cls);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Homograph injection

namespace {

bool looks_numeric(const std::string& v) {
    if (v.empty()) return false;
    char* end = nullptr;
    std::strtod(v.c_str(), &end);
    return end == v.c_str() + v.size();
}

}  // namespace

InjectionResult inject_homographs(const Lake& lake, const UnionabilityMap& umap,
                                  const InjectionSpec& spec, const NormalizeOptions& opts) {
    if (spec.meanings < 2)
        throw std::invalid_argument("inject: a homograph needs at least 2 meanings");

    InjectionResult result;
    result.lake = lake;
    if (spec.count == 0) {
        result.gt = label_homographs(lake, umap, opts);
        return result;
    }

    BipartiteGraph g = BipartiteGraph::build(lake, opts);

    // Per value: its single class (multi-class values are already homographs
    // and are not replacement material).
    struct Candidate {
        NodeId node;
        uint32_t cls;
    };
    std::vector<Candidate> eligible;
    for (NodeId v = 0; v < g.value_count(); ++v) {
        const std::string& name = g.value_name(v);
        if (name.size() < spec.min_length) continue;
        if (spec.string_only && looks_numeric(name)) continue;

        uint32_t cls = 0;
        bool single = true, first = true;
        for (NodeId a : g.neighbors(v)) {
            uint32_t c = umap.class_of(g.attribute(a).id);
            if (first) {
                cls = c;
                first = false;
            } else if (c != cls) {
                single = false;
                break;
            }
        }
        if (!single || first) continue;
        if (spec.min_cardinality > 0 &&
            g.value_neighbors(v).cardinality() < spec.min_cardinality)
            continue;
        eligible.push_back({v, cls});
    }
    // Value ids are in dictionary order already; keep that as the base order.

    std::set<uint32_t> class_pool;
    for (const auto& c : eligible) class_pool.insert(c.cls);
    auto constraint = [&](const std::string& what) {
        std::ostringstream msg;
        msg << "inject: " << what << " (need " << spec.count << " homographs x " << spec.meanings
            << " meanings; eligible values: " << eligible.size()
            << " across " << class_pool.size() << " classes; constraints: min_cardinality="
            << spec.min_cardinality << ", min_length=" << spec.min_length
            << ", string_only=" << (spec.string_only ? "yes" : "no") << ")";
        return std::runtime_error(msg.str());
    };
    if (class_pool.size() < spec.meanings)
        throw constraint("not enough mutually non-unionable columns with eligible values");
    if (eligible.size() < static_cast<size_t>(spec.count) * spec.meanings)
        throw constraint("not enough eligible values");

    Rng rng(spec.seed);
    std::unordered_map<std::string, std::string> rewrite;  // normalized value -> raw token
    GroundTruth injected_only;

    for (uint32_t i = 1; i <= spec.count; ++i) {
        std::string raw_token = "InjectedHomograph" + std::to_string(i);
        std::string norm_token = *normalize_value(raw_token, opts);
        if (g.find_value(norm_token))
            throw std::runtime_error("inject: token already present in lake: " + norm_token);

        std::set<uint32_t> classes_used;
        for (uint32_t m = 0; m < spec.meanings; ++m) {
            size_t pick = eligible.size();
            for (int attempt = 0; attempt < 64 && !eligible.empty(); ++attempt) {
                size_t j = rng.below(eligible.size());
                if (!classes_used.count(eligible[j].cls)) {
                    pick = j;
                    break;
                }
            }
            if (pick == eligible.size()) {  // rejection failed; scan deterministically
                for (size_t j = 0; j < eligible.size(); ++j)
                    if (!classes_used.count(eligible[j].cls)) {
                        pick = j;
                        break;
                    }
            }
            if (pick == eligible.size())
                throw constraint("ran out of eligible values in distinct classes");
            Candidate chosen = eligible[pick];
            eligible.erase(eligible.begin() + static_cast<ptrdiff_t>(pick));
            classes_used.insert(chosen.cls);
            rewrite[g.value_name(chosen.node)] = raw_token;
        }
        injected_only.labels[norm_token] = {true, spec.meanings};
        result.tokens.push_back(norm_token);
    }

    for (auto& t : result.lake.tables) {
        for (auto& col : t.columns) {
            for (auto& cell : col.cells) {
                auto v = normalize_value(cell, opts);
                if (!v) continue;
                auto it = rewrite.find(*v);
                if (it != rewrite.end()) cell = it->second;
            }
        }
    }

    result.gt = label_homographs(result.lake, umap, opts);
    return result;
}

// ---------------------------------------------------------------------------
// CSV output

void write_lake_csv(const Lake& lake, const std::filesystem::path& dir, char delimiter) {
    std::filesystem::create_directories(dir);
    for (const auto& t : lake.tables) {
        std::ofstream out(dir / (t.source_id + ".csv"), std::ios::binary);
        if (!out) throw std::runtime_error("cannot write table file for " + t.source_id);
        for (size_t j = 0; j < t.columns.size(); ++j) {
            if (j) out << delimiter;
            std::string name =
                t.columns[j].display_name.value_or("c" + std::to_string(j));
            out << detail::csv_escape(name, delimiter);
        }
        out << '\n';
        size_t rows = t.row_count();
        for (size_t r = 0; r < rows; ++r) {
            for (size_t j = 0; j < t.columns.size(); ++j) {
                if (j) out << delimiter;
                out << detail::csv_escape(t.columns[j].cells[r], delimiter);
            }
            out << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Spec JSON round-trip

std::string GeneratorSpec::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    auto& jp = j["pools"] = nlohmann::json::array();
    for (const auto& p : pools) jp.push_back({{"size", p.size}});
    auto& jt = j["tables"] = nlohmann::json::array();
    for (const auto& t : tables) {
        nlohmann::json cols = nlohmann::json::array();
        for (const auto& c : t.columns)
            cols.push_back({{"pool", c.pool},
                            {"coverage", c.coverage},
                            {"mode", c.mode == SampleMode::slice ? "slice" : "uniform"}});
        jt.push_back({{"name", t.name}, {"rows", t.rows}, {"columns", cols}});
    }
    auto& jh = j["planted"] = nlohmann::json::array();
    for (const auto& h : planted) jh.push_back({{"pools", h.pools}});
    return j.dump(2);
}

GeneratorSpec GeneratorSpec::from_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    GeneratorSpec spec;
    spec.seed = j.value("seed", 1ULL);
    for (const auto& p : j.at("pools")) spec.pools.push_back({p.at("size").get<uint32_t>()});
    for (const auto& t : j.at("tables")) {
        TableSpec ts;
        ts.name = t.at("name").get<std::string>();
        ts.rows = t.at("rows").get<uint32_t>();
        for (const auto& c : t.at("columns")) {
            ColumnSpec cs;
            cs.pool = c.at("pool").get<uint32_t>();
            cs.coverage = c.value("coverage", 1.0);
            cs.mode = c.value("mode", std::string("uniform")) == "slice" ? SampleMode::slice
                                                                         : SampleMode::uniform;
            ts.columns.push_back(cs);
        }
        spec.tables.push_back(std::move(ts));
    }
    if (j.contains("planted"))
        for (const auto& h : j.at("planted"))
            spec.planted.push_back({h.at("pools").get<std::vector<uint32_t>>()});
    spec.validate();
    return spec;
}

}  // namespace lakedis
