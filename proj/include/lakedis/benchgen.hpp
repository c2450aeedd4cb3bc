#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lakedis/graph.hpp"
#include "lakedis/types.hpp"

namespace lakedis {

// Partition of attributes into unionability classes. Two columns are
// unionable iff they share a class; every attribute belongs to exactly one.
struct UnionabilityMap {
    std::map<AttributeId, uint32_t> classes;

    uint32_t class_of(const AttributeId& a) const;  // throws if missing
    uint32_t class_count() const;

    void save_json(std::ostream& out) const;
    static UnionabilityMap load_json(std::istream& in);
};

// Per-value labels keyed by normalized value string. A value is a homograph
// iff its attributes span more than one unionability class; the meaning count
// is the number of distinct classes.
struct GroundTruth {
    struct Entry {
        bool homograph = false;
        uint32_t meanings = 1;
    };
    std::map<std::string, Entry> labels;

    size_t homograph_count() const;
    bool is_homograph(const std::string& value) const;

    void save_csv(std::ostream& out) const;
    static GroundTruth load_csv(std::istream& in);
};

GroundTruth label_homographs(const Lake& lake, const UnionabilityMap& umap,
                             const NormalizeOptions& opts = {});

// ---------------------------------------------------------------------------
// Synthetic lake generation

enum class SampleMode {
    uniform,  // column covers a uniform subset of its pool
    slice,    // column covers a contiguous run of the pool (partial overlaps)
};

struct PoolSpec {
    uint32_t size = 0;  // tokens named D{pool}_V{index}
};

struct ColumnSpec {
    uint32_t pool = 0;
    double coverage = 1.0;  // fraction of the pool a column draws
    SampleMode mode = SampleMode::uniform;
};

struct TableSpec {
    std::string name;
    uint32_t rows = 0;
    std::vector<ColumnSpec> columns;
};

// A planted homograph is one token inserted into every listed pool; its
// meaning count is the number of pools.
struct PlantedHomograph {
    std::vector<uint32_t> pools;
};

struct GeneratorSpec {
    std::vector<PoolSpec> pools;
    std::vector<TableSpec> tables;
    std::vector<PlantedHomograph> planted;
    uint64_t seed = 1;

    void validate() const;  // throws with an explanation when inconsistent

    std::string to_json() const;
    static GeneratorSpec from_json(std::istream& in);
};

struct GeneratedLake {
    Lake lake;
    UnionabilityMap umap;
    GroundTruth gt;
};

// Deterministic for a fixed seed. The returned ground truth is re-derived via
// label_homographs and checked against the plan.
GeneratedLake generate_lake(const GeneratorSpec& spec);

// Replaces every occurrence of every homograph by a fresh token unique to its
// (value, class) pair. Relabeling the result yields zero homographs; table
// shapes and attribute cardinalities are preserved.
Lake remove_homographs(const Lake& lake, const UnionabilityMap& umap, const GroundTruth& gt,
                       const NormalizeOptions& opts = {});

struct InjectionSpec {
    uint32_t count = 0;
    uint32_t meanings = 2;        // values replaced per injected token
    uint32_t min_cardinality = 0; // threshold on |N(v)| of replaced values
    uint32_t min_length = 3;
    bool string_only = true;      // skip number-like values
    uint64_t seed = 1;
};

struct InjectionResult {
    Lake lake;
    GroundTruth gt;                   // marks exactly the injected tokens
    std::vector<std::string> tokens;  // normalized token strings
};

// Picks `meanings` eligible values from mutually non-unionable columns and
// replaces all their occurrences with "InjectedHomograph{i}". Requires a
// clean input lake. Errors name the binding constraint.
InjectionResult inject_homographs(const Lake& lake, const UnionabilityMap& umap,
                                  const InjectionSpec& spec,
                                  const NormalizeOptions& opts = {});

// Writes tables as {table}.csv files readable by scan_lake.
void write_lake_csv(const Lake& lake, const std::filesystem::path& dir, char delimiter = ',');

// ---------------------------------------------------------------------------
// Built-in benchmark presets (sized for a single desk machine)

// 13 tables / ~17k values / 55 planted homographs, two small heavily
// overlapping pools of 193 and 50 values.
GeneratorSpec small_benchmark_spec(uint64_t seed);
// ~50k-node lake with 50 loud planted homographs, for approximation studies.
GeneratorSpec approx_benchmark_spec(uint64_t seed);
// Clean lake (no planted homographs) with skewed pool sizes and sliced
// columns, for injection sweeps.
GeneratorSpec injection_benchmark_spec(uint64_t seed);
// ~1M-edge lake for runtime scaling studies.
GeneratorSpec scaling_benchmark_spec(uint64_t seed);

}  // namespace lakedis
