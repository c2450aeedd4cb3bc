#include <string>

#include "lakedis/benchgen.hpp"
#include "lakedis/rng.hpp"

namespace lakedis {

namespace {

std::string table_name(size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "tbl%03zu", i);
    return buf;
}

// Deal a flat column list into tables of `per_table` columns.
void deal_tables(GeneratorSpec& spec, const std::vector<ColumnSpec>& cols, size_t per_table,
                 uint32_t rows) {
    for (size_t i = 0; i < cols.size(); i += per_table) {
        TableSpec t;
        t.name = table_name(spec.tables.size());
        t.rows = rows;
        for (size_t j = i; j < std::min(cols.size(), i + per_table); ++j)
            t.columns.push_back(cols[j]);
        spec.tables.push_back(std::move(t));
    }
}

std::vector<PlantedHomograph> random_pool_pairs(uint64_t seed, size_t count, uint32_t pool_lo,
                                                uint32_t pool_hi) {
    Rng rng(Rng::mix(seed, 0x9a7edULL));
    std::vector<PlantedHomograph> out;
    const uint32_t span = pool_hi - pool_lo;
    for (size_t i = 0; i < count; ++i) {
        uint32_t a = pool_lo + static_cast<uint32_t>(rng.below(span));
        uint32_t b = a;
        while (b == a) b = pool_lo + static_cast<uint32_t>(rng.below(span));
        out.push_back({{a, b}});
    }
    return out;
}

}  // namespace

GeneratorSpec small_benchmark_spec(uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;

    // 11 well-mixed content pools, 4 weakly-overlapping (sliced) ones, and two
    // small pools whose columns cover everything and which share 17 tokens.
    for (int i = 0; i < 11; ++i) spec.pools.push_back({1150});
    for (int i = 0; i < 4; ++i) spec.pools.push_back({1150});
    spec.pools.push_back({176});  // + 17 shared tokens -> 193 values
    spec.pools.push_back({33});   // + 17 shared tokens -> 50 values

    auto col = [](uint32_t pool) {
        ColumnSpec c;
        c.pool = pool;
        if (pool < 11) {
            c.coverage = 0.82;
            c.mode = SampleMode::uniform;
        } else {
            c.coverage = 0.45;
            c.mode = SampleMode::slice;
        }
        return c;
    };

    std::vector<ColumnSpec> cols;
    for (int pass = 0; pass < 2; ++pass)
        for (uint32_t p = 0; p < 15; ++p) cols.push_back(col(p));
    for (uint32_t p = 11; p < 14; ++p) cols.push_back(col(p));
    deal_tables(spec, cols, 3, 1000);  // 11 tables x 3 columns

    TableSpec small_a;
    small_a.name = "abbrev_a";
    small_a.rows = 193;
    small_a.columns = {{15, 1.0, SampleMode::uniform}, {15, 1.0, SampleMode::uniform}};
    spec.tables.push_back(small_a);
    TableSpec small_b;
    small_b.name = "abbrev_b";
    small_b.rows = 50;
    small_b.columns = {{16, 1.0, SampleMode::uniform}, {16, 1.0, SampleMode::uniform}};
    spec.tables.push_back(small_b);

    spec.planted = random_pool_pairs(seed, 38, 0, 11);
    for (int i = 0; i < 17; ++i) spec.planted.push_back({{15, 16}});
    return spec;
}

GeneratorSpec approx_benchmark_spec(uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    for (int i = 0; i < 49; ++i) spec.pools.push_back({1018});

    std::vector<ColumnSpec> cols;
    for (int pass = 0; pass < 2; ++pass)
        for (uint32_t p = 0; p < 49; ++p) cols.push_back({p, 0.8, SampleMode::uniform});
    deal_tables(spec, cols, 3, 1000);

    spec.planted = random_pool_pairs(seed, 50, 0, 49);
    return spec;
}

GeneratorSpec injection_benchmark_spec(uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;

    std::vector<ColumnSpec> cols;
    // Dense pools: broad overlapping slices, high co-occurrence.
    for (uint32_t i = 0; i < 10; ++i) {
        uint32_t pool = static_cast<uint32_t>(spec.pools.size());
        spec.pools.push_back({1600 + 80 * i});
        for (int c = 0; c < 12; ++c)
            cols.push_back({pool, 0.40 + 0.03 * (i % 5), SampleMode::slice});
    }
    // Chain pools: narrow slices that only partially overlap, so unambiguous
    // bridge values with mid-range betweenness exist.
    for (uint32_t i = 0; i < 12; ++i) {
        uint32_t pool = static_cast<uint32_t>(spec.pools.size());
        spec.pools.push_back({1200});
        for (int c = 0; c < 18; ++c) cols.push_back({pool, 0.08, SampleMode::slice});
    }
    // Small pools: low-cardinality values.
    for (uint32_t i = 0; i < 40; ++i) {
        uint32_t pool = static_cast<uint32_t>(spec.pools.size());
        spec.pools.push_back({60 + 10 * i});
        for (int c = 0; c < 3; ++c) cols.push_back({pool, 0.6, SampleMode::uniform});
    }

    // Rows per table are sized by the widest column dealt into it, so deal
    // like-sized columns together: the list above is already grouped.
    size_t i = 0;
    while (i < cols.size()) {
        TableSpec t;
        t.name = table_name(spec.tables.size());
        size_t need = 1;
        for (size_t j = i; j < std::min(cols.size(), i + 4); ++j) {
            const auto& c = cols[j];
            size_t draw = static_cast<size_t>(c.coverage * spec.pools[c.pool].size) + 2;
            need = std::max(need, draw);
            t.columns.push_back(c);
        }
        t.rows = static_cast<uint32_t>(need);
        spec.tables.push_back(std::move(t));
        i += 4;
    }
    return spec;
}

GeneratorSpec scaling_benchmark_spec(uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    for (int i = 0; i < 60; ++i) spec.pools.push_back({2000});
    std::vector<ColumnSpec> cols;
    for (int pass = 0; pass < 8; ++pass)
        for (uint32_t p = 0; p < 60; ++p) cols.push_back({p, 1.0, SampleMode::uniform});
    deal_tables(spec, cols, 4, 2000);
    return spec;
}

}  // namespace lakedis
