#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lakedis {

// Identity of a column inside a lake. Display names carry no identity:
// two columns named "name" in different tables are different attributes,
// and an unnamed column is as good as a named one.
struct AttributeId {
    std::string table;
    uint32_t column_index = 0;

    auto operator<=>(const AttributeId&) const = default;
    std::string to_string() const { return table + "[" + std::to_string(column_index) + "]"; }
};

struct Column {
    std::optional<std::string> display_name;
    std::vector<std::string> cells;  // raw, un-normalized
};

struct RawTable {
    std::string source_id;  // unique within a lake
    bool has_header = true;
    std::vector<Column> columns;  // all columns hold the same number of cells

    size_t row_count() const { return columns.empty() ? 0 : columns.front().cells.size(); }
};

struct FileStats {
    std::string path;
    std::string source_id;
    size_t rows = 0;
    size_t columns = 0;
    size_t padded_rows = 0;  // ragged rows padded with missing markers
    bool ok = true;
    std::string message;  // warning text for skipped files
};

struct ScanStats {
    std::vector<FileStats> files;

    size_t skipped() const {
        size_t k = 0;
        for (const auto& f : files)
            if (!f.ok) ++k;
        return k;
    }
};

// Cell normalization policy. Cells equal to a missing marker (after
// trimming and upper-casing) are excluded from the graph. The default
// treats only the empty cell as missing: null-like strings such as "."
// or "Not Available" are first-class values.
struct NormalizeOptions {
    std::vector<std::string> missing_markers;
};

struct Lake {
    std::vector<RawTable> tables;
    ScanStats stats;

    size_t attribute_count() const {
        size_t a = 0;
        for (const auto& t : tables) a += t.columns.size();
        return a;
    }
    size_t distinct_value_count(const NormalizeOptions& opts = {}) const;
};

}  // namespace lakedis
