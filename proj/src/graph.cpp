#include "lakedis/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "lakedis/ingest.hpp"

namespace lakedis {

namespace {

// Snapshot escaping: values may contain separators and newlines.
std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\' || i + 1 == s.size()) {
            out.push_back(s[i]);
            continue;
        }
        ++i;
        switch (s[i]) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            default: out.push_back(s[i]);
        }
    }
    return out;
}

}  // namespace

void BipartiteGraph::finalize(std::vector<std::pair<uint32_t, uint32_t>>& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = edges.size();

    const size_t n = values_.size();
    const size_t total = n + attributes_.size();
    offsets_.assign(total + 1, 0);
    for (const auto& [v, a] : edges) {
        ++offsets_[v + 1];
        ++offsets_[n + a + 1];
    }
    for (size_t i = 1; i <= total; ++i) offsets_[i] += offsets_[i - 1];
    adjacency_.assign(2 * edges_, 0);
    std::vector<uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [v, a] : edges) {
        NodeId an = static_cast<NodeId>(n + a);
        adjacency_[cursor[v]++] = an;
        adjacency_[cursor[an]++] = v;
    }
    for (size_t node = 0; node < total; ++node)
        std::sort(adjacency_.begin() + static_cast<ptrdiff_t>(offsets_[node]),
                  adjacency_.begin() + static_cast<ptrdiff_t>(offsets_[node + 1]));
    n_values_ = n;
    values_sorted_ = std::is_sorted(values_.begin(), values_.end());
}

BipartiteGraph BipartiteGraph::build(const Lake& lake, const NormalizeOptions& opts) {
    // Collect distinct (value, attribute) incidences with a per-column dedupe.
    std::vector<AttributeInfo> attrs;
    std::vector<std::vector<std::string>> per_attr_values;
    for (const auto& t : lake.tables) {
        for (size_t j = 0; j < t.columns.size(); ++j) {
            const Column& col = t.columns[j];
            std::unordered_map<std::string, bool> seen;
            std::vector<std::string> distinct;
            for (const auto& cell : col.cells) {
                auto v = normalize_value(cell, opts);
                if (!v) continue;
                if (seen.emplace(*v, true).second) distinct.push_back(std::move(*v));
            }
            if (distinct.empty()) continue;  // attribute without values gets no node
            attrs.push_back({AttributeId{t.source_id, static_cast<uint32_t>(j)},
                             col.display_name});
            per_attr_values.push_back(std::move(distinct));
        }
    }
    if (attrs.empty()) throw std::runtime_error("graph build: lake has no values");

    // Canonical ids: attributes by (table, column) — already in scan order but
    // sort anyway — values lexicographically.
    std::vector<size_t> attr_order(attrs.size());
    for (size_t i = 0; i < attrs.size(); ++i) attr_order[i] = i;
    std::sort(attr_order.begin(), attr_order.end(),
              [&](size_t a, size_t b) { return attrs[a].id < attrs[b].id; });

    std::vector<std::string> dict;
    for (const auto& vals : per_attr_values)
        for (const auto& v : vals) dict.push_back(v);
    std::sort(dict.begin(), dict.end());
    dict.erase(std::unique(dict.begin(), dict.end()), dict.end());

    auto value_id = [&](const std::string& v) {
        return static_cast<uint32_t>(
            std::lower_bound(dict.begin(), dict.end(), v) - dict.begin());
    };

    BipartiteGraph g;
    g.attributes_.reserve(attrs.size());
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (size_t rank = 0; rank < attr_order.size(); ++rank) {
        size_t src = attr_order[rank];
        g.attributes_.push_back(std::move(attrs[src]));
        for (const auto& v : per_attr_values[src])
            edges.emplace_back(value_id(v), static_cast<uint32_t>(rank));
    }
    g.values_ = std::move(dict);
    g.finalize(edges);
    return g;
}

BipartiteGraph BipartiteGraph::from_incidences(std::vector<std::string> values,
                                               std::vector<AttributeInfo> attributes,
                                               std::vector<std::pair<uint32_t, uint32_t>> edges) {
    for (const auto& [v, a] : edges)
        if (v >= values.size() || a >= attributes.size())
            throw std::invalid_argument("from_incidences: edge endpoint out of range");
    BipartiteGraph g;
    g.values_ = std::move(values);
    g.attributes_ = std::move(attributes);
    g.finalize(edges);
    return g;
}

std::span<const NodeId> BipartiteGraph::neighbors(NodeId id) const {
    if (id >= node_count()) throw std::out_of_range("node id out of range");
    return {adjacency_.data() + offsets_[id], adjacency_.data() + offsets_[id + 1]};
}

const std::string& BipartiteGraph::value_name(NodeId value_node) const {
    if (!is_value_node(value_node)) throw std::invalid_argument("not a value node");
    return values_[value_node];
}

const AttributeInfo& BipartiteGraph::attribute(NodeId attribute_node) const {
    if (attribute_node < n_values_ || attribute_node >= node_count())
        throw std::invalid_argument("not an attribute node");
    return attributes_[attribute_node - n_values_];
}

std::optional<NodeId> BipartiteGraph::find_value(std::string_view normalized) const {
    if (values_sorted_) {
        auto it = std::lower_bound(values_.begin(), values_.end(), normalized);
        if (it == values_.end() || *it != normalized) return std::nullopt;
        return static_cast<NodeId>(it - values_.begin());
    }
    for (size_t i = 0; i < values_.size(); ++i)
        if (values_[i] == normalized) return static_cast<NodeId>(i);
    return std::nullopt;
}

ValueNeighborhood BipartiteGraph::value_neighbors(NodeId v) const {
    if (!is_value_node(v)) throw std::invalid_argument("value_neighbors: not a value node");
    ValueNeighborhood out;
    out.center = v;
    for (NodeId a : neighbors(v))
        for (NodeId w : neighbors(a))
            if (w != v) out.neighbors.push_back(w);
    std::sort(out.neighbors.begin(), out.neighbors.end());
    out.neighbors.erase(std::unique(out.neighbors.begin(), out.neighbors.end()),
                        out.neighbors.end());
    return out;
}

GraphStats BipartiteGraph::stats() const {
    GraphStats s;
    s.value_nodes = value_count();
    s.attribute_nodes = attribute_count();
    s.edges = edge_count();
    for (NodeId v = 0; v < n_values_; ++v) ++s.value_degree_hist[degree(v)];
    bool first = true;
    for (size_t i = 0; i < attributes_.size(); ++i) {
        size_t d = degree(attribute_node(i));
        ++s.attribute_degree_hist[d];
        if (first) {
            s.min_attribute_cardinality = s.max_attribute_cardinality = d;
            first = false;
        } else {
            s.min_attribute_cardinality = std::min(s.min_attribute_cardinality, d);
            s.max_attribute_cardinality = std::max(s.max_attribute_cardinality, d);
        }
    }
    return s;
}

void BipartiteGraph::save(std::ostream& out) const {
    out << "lakedis-graph 1\n";
    out << values_.size() << ' ' << attributes_.size() << ' ' << edges_ << '\n';
    for (const auto& v : values_) out << 'V' << ' ' << escape(v) << '\n';
    for (const auto& a : attributes_)
        out << 'A' << ' ' << escape(a.id.table) << '\t' << a.id.column_index << '\t'
            << (a.display_name ? escape(*a.display_name) : std::string()) << '\n';
    for (NodeId v = 0; v < n_values_; ++v)
        for (NodeId a : neighbors(v)) out << 'E' << ' ' << v << ' ' << (a - n_values_) << '\n';
}

BipartiteGraph BipartiteGraph::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("lakedis-graph 1", 0) != 0)
        throw std::runtime_error("graph snapshot: bad header");
    size_t n = 0, a = 0, m = 0;
    if (!(in >> n >> a >> m)) throw std::runtime_error("graph snapshot: bad counts");
    std::getline(in, line);

    std::vector<std::string> values;
    values.reserve(n);
    std::vector<AttributeInfo> attrs;
    attrs.reserve(a);
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    edges.reserve(m);

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char tag = line[0];
        std::string_view rest = std::string_view(line).substr(2);
        if (tag == 'V') {
            values.push_back(unescape(rest));
        } else if (tag == 'A') {
            size_t t1 = rest.find('\t');
            size_t t2 = rest.find('\t', t1 + 1);
            if (t1 == std::string_view::npos || t2 == std::string_view::npos)
                throw std::runtime_error("graph snapshot: bad attribute row");
            AttributeInfo info;
            info.id.table = unescape(rest.substr(0, t1));
            info.id.column_index =
                static_cast<uint32_t>(std::stoul(std::string(rest.substr(t1 + 1, t2 - t1 - 1))));
            std::string disp = unescape(rest.substr(t2 + 1));
            if (!disp.empty()) info.display_name = disp;
            attrs.push_back(std::move(info));
        } else if (tag == 'E') {
            uint32_t v = 0, ai = 0;
            if (sscanf(line.c_str(), "E %u %u", &v, &ai) != 2)
                throw std::runtime_error("graph snapshot: bad edge row");
            edges.emplace_back(v, ai);
        }
    }
    if (values.size() != n || attrs.size() != a || edges.size() != m)
        throw std::runtime_error("graph snapshot: counts do not match body");
    return from_incidences(std::move(values), std::move(attrs), std::move(edges));
}

BipartiteGraph BipartiteGraph::attribute_sample(size_t target_edges, Rng& rng) const {
    std::vector<size_t> order(attributes_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    std::vector<char> attr_in(attributes_.size(), 0);
    size_t edges_so_far = 0;
    for (size_t idx : order) {
        if (edges_so_far >= target_edges) break;
        attr_in[idx] = 1;
        edges_so_far += degree(attribute_node(idx));
    }

    std::vector<char> value_in(n_values_, 0);
    for (size_t i = 0; i < attributes_.size(); ++i)
        if (attr_in[i])
            for (NodeId v : neighbors(attribute_node(i))) value_in[v] = 1;

    std::vector<uint32_t> value_map(n_values_, 0);
    std::vector<std::string> new_values;
    for (NodeId v = 0; v < n_values_; ++v)
        if (value_in[v]) {
            value_map[v] = static_cast<uint32_t>(new_values.size());
            new_values.push_back(values_[v]);
        }
    std::vector<AttributeInfo> new_attrs;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (size_t i = 0; i < attributes_.size(); ++i) {
        if (!attr_in[i]) continue;
        uint32_t ai = static_cast<uint32_t>(new_attrs.size());
        new_attrs.push_back(attributes_[i]);
        for (NodeId v : neighbors(attribute_node(i))) edges.emplace_back(value_map[v], ai);
    }
    return from_incidences(std::move(new_values), std::move(new_attrs), std::move(edges));
}

bool BipartiteGraph::operator==(const BipartiteGraph& other) const {
    return n_values_ == other.n_values_ && edges_ == other.edges_ &&
           values_ == other.values_ && offsets_ == other.offsets_ &&
           adjacency_ == other.adjacency_ &&
           attributes_.size() == other.attributes_.size() &&
           std::equal(attributes_.begin(), attributes_.end(), other.attributes_.begin(),
                      [](const AttributeInfo& a, const AttributeInfo& b) {
                          return a.id == b.id && a.display_name == b.display_name;
                      });
}

BipartiteGraph prune_singletons(const BipartiteGraph& g) {
    const size_t n = g.value_count();
    std::vector<char> keep(n, 0);
    for (NodeId v = 0; v < n; ++v) keep[v] = g.degree(v) >= 2;

    std::vector<uint32_t> value_map(n, 0);
    std::vector<std::string> values;
    for (NodeId v = 0; v < n; ++v)
        if (keep[v]) {
            value_map[v] = static_cast<uint32_t>(values.size());
            values.push_back(g.value_name(v));
        }

    std::vector<AttributeInfo> attrs;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (size_t i = 0; i < g.attribute_count(); ++i) {
        NodeId an = g.attribute_node(i);
        std::vector<uint32_t> kept_vals;
        for (NodeId v : g.neighbors(an))
            if (keep[v]) kept_vals.push_back(value_map[v]);
        if (kept_vals.empty()) continue;  // attribute left with no values
        uint32_t ai = static_cast<uint32_t>(attrs.size());
        attrs.push_back(g.attribute(an));
        for (uint32_t v : kept_vals) edges.emplace_back(v, ai);
    }
    return BipartiteGraph::from_incidences(std::move(values), std::move(attrs), std::move(edges));
}

}  // namespace lakedis
