#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "lakedis/types.hpp"

namespace lakedis {

// Trims leading/trailing ASCII whitespace and upper-cases ASCII letters
// (bytes outside ASCII pass through unchanged). Returns nothing for cells
// that are missing: empty after trimming, or equal to a missing marker.
// Total and idempotent.
std::optional<std::string> normalize_value(std::string_view raw,
                                           const NormalizeOptions& opts = {});

struct ScanOptions {
    char delimiter = ',';
    char quote = '"';
    bool has_header = true;
    NormalizeOptions normalize;
    // Optional JSON file mapping file name -> logical table name.
    std::string manifest_path;
    // Files with other extensions are ignored.
    std::vector<std::string> extensions = {".csv", ".tsv", ".txt"};
    int workers = 0;
};

// Parses one delimited file body (RFC-4180 style quoting). Ragged rows are
// padded with empty cells; rows wider than the header grow unnamed columns.
RawTable parse_delimited(std::string_view text, std::string source_id,
                         const ScanOptions& opts, FileStats* stats = nullptr);

// Scans a directory of delimited files into a Lake, one table per file,
// tables sorted by source_id. Unreadable files are recorded in the stats and
// skipped; a directory yielding zero parseable files is an error.
Lake scan_lake(const std::filesystem::path& dir, const ScanOptions& opts = {});

}  // namespace lakedis
