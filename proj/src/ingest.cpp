#include "lakedis/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "lakedis/parallel.hpp"
#include "json.hpp"

namespace lakedis {

namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::string trim_upper(std::string_view raw) {
    size_t b = 0, e = raw.size();
    while (b < e && is_ascii_space(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && is_ascii_space(static_cast<unsigned char>(raw[e - 1]))) --e;
    std::string out;
    out.reserve(e - b);
    for (size_t i = b; i < e; ++i) {
        char c = raw[i];
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::optional<std::string> normalize_value(std::string_view raw, const NormalizeOptions& opts) {
    std::string v = trim_upper(raw);
    if (v.empty()) return std::nullopt;
    for (const auto& marker : opts.missing_markers) {
        if (v == trim_upper(marker)) return std::nullopt;
    }
    return v;
}

size_t Lake::distinct_value_count(const NormalizeOptions& opts) const {
    std::unordered_set<std::string> seen;
    for (const auto& t : tables)
        for (const auto& col : t.columns)
            for (const auto& cell : col.cells)
                if (auto v = normalize_value(cell, opts)) seen.insert(std::move(*v));
    return seen.size();
}

// ---------------------------------------------------------------------------
// Delimited parsing

namespace {

// One pass over the text, RFC-4180 quoting rules: a field starting with the
// quote char runs to the matching quote, doubled quotes escape themselves.
std::vector<std::vector<std::string>> split_rows(std::string_view text, char delim, char quote) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started_quoted = false;
    bool any = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started_quoted = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        any = true;
        if (in_quotes) {
            if (c == quote) {
                if (i + 1 < text.size() && text[i + 1] == quote) {
                    field.push_back(quote);
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == quote && field.empty() && !field_started_quoted) {
            in_quotes = true;
            field_started_quoted = true;
        } else if (c == delim) {
            end_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_row();
        } else {
            field.push_back(c);
        }
    }
    if (any && (!field.empty() || !row.empty() || field_started_quoted)) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        end_row();
    }
    return rows;
}

}  // namespace

RawTable parse_delimited(std::string_view text, std::string source_id, const ScanOptions& opts,
                         FileStats* stats) {
    auto rows = split_rows(text, opts.delimiter, opts.quote);

    RawTable table;
    table.source_id = std::move(source_id);
    table.has_header = opts.has_header;

    size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.size());
    if (width == 0 || rows.empty()) {
        if (stats) {
            stats->ok = false;
            stats->message = "no rows";
        }
        return table;
    }

    size_t first_data = 0;
    table.columns.resize(width);
    if (opts.has_header) {
        first_data = 1;
        const auto& header = rows.front();
        for (size_t j = 0; j < width; ++j) {
            if (j < header.size() && !header[j].empty()) table.columns[j].display_name = header[j];
        }
    }

    size_t padded = 0;
    for (size_t i = first_data; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != width) ++padded;
        for (size_t j = 0; j < width; ++j)
            table.columns[j].cells.push_back(j < r.size() ? r[j] : std::string());
    }

    if (stats) {
        stats->rows = rows.size() - first_data;
        stats->columns = width;
        stats->padded_rows = padded;
        stats->ok = true;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Directory scan

namespace {

std::map<std::string, std::string> load_manifest(const std::string& path) {
    std::map<std::string, std::string> mapping;
    if (path.empty()) return mapping;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;
    for (auto it = j.begin(); it != j.end(); ++it) mapping[it.key()] = it.value().get<std::string>();
    return mapping;
}

}  // namespace

Lake scan_lake(const std::filesystem::path& dir, const ScanOptions& opts) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());

    auto manifest = load_manifest(opts.manifest_path);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (std::find(opts.extensions.begin(), opts.extensions.end(), ext) !=
            opts.extensions.end())
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    Lake lake;
    lake.tables.resize(files.size());
    lake.stats.files.resize(files.size());

    parallel_for(files.size(), opts.workers, [&](size_t i) {
        const auto& path = files[i];
        FileStats& st = lake.stats.files[i];
        st.path = path.string();
        std::string name = path.filename().string();
        auto it = manifest.find(name);
        st.source_id = it != manifest.end() ? it->second : path.stem().string();

        std::ifstream in(path, std::ios::binary);
        if (!in) {
            st.ok = false;
            st.message = "cannot open";
            return;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        if (in.bad()) {
            st.ok = false;
            st.message = "read error";
            return;
        }
        lake.tables[i] = parse_delimited(buf.str(), st.source_id, opts, &st);
    });

    // Drop skipped files, order tables by source_id.
    std::vector<RawTable> kept;
    for (size_t i = 0; i < lake.tables.size(); ++i)
        if (lake.stats.files[i].ok) kept.push_back(std::move(lake.tables[i]));
    std::sort(kept.begin(), kept.end(),
              [](const RawTable& a, const RawTable& b) { return a.source_id < b.source_id; });
    for (size_t i = 1; i < kept.size(); ++i)
        if (kept[i].source_id == kept[i - 1].source_id)
            throw std::runtime_error("duplicate table name: " + kept[i].source_id);
    lake.tables = std::move(kept);

    if (lake.tables.empty())
        throw std::runtime_error("no parseable delimited files in " + dir.string());
    return lake;
}

}  // namespace lakedis
