// lakedis: homograph detection for data lakes.
//
// Pipeline: scan a directory of delimited tables into a value/attribute
// co-occurrence graph, score value nodes by a centrality measure, and rank
// them as homograph candidates. Also: synthetic lake generation, homograph
// injection, and top-k evaluation against ground truth.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lakedis/benchgen.hpp"
#include "lakedis/centrality.hpp"
#include "lakedis/detect.hpp"
#include "lakedis/evalkit.hpp"
#include "lakedis/graph.hpp"
#include "lakedis/ingest.hpp"
#include "lakedis/parallel.hpp"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 2;

struct IngestFlags {
    std::string delimiter = ",";
    std::string quote = "\"";
    bool no_header = false;
    std::vector<std::string> missing;
    std::string manifest;

    void attach(CLI::App* cmd) {
        cmd->add_option("--delimiter", delimiter, "Field delimiter (single character)");
        cmd->add_option("--quote", quote, "Quote character");
        cmd->add_flag("--no-header", no_header, "Treat the first row as data");
        cmd->add_option("--missing", missing, "Extra cell values treated as missing");
        cmd->add_option("--manifest", manifest, "JSON file mapping file name to table name");
    }

    lakedis::ScanOptions options(int workers) const {
        if (delimiter.size() != 1) throw CLI::ValidationError("--delimiter must be one character");
        if (quote.size() != 1) throw CLI::ValidationError("--quote must be one character");
        lakedis::ScanOptions opts;
        opts.delimiter = delimiter[0];
        opts.quote = quote[0];
        opts.has_header = !no_header;
        opts.normalize.missing_markers = missing;
        opts.manifest_path = manifest;
        opts.workers = workers;
        return opts;
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

lakedis::BipartiteGraph load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph snapshot " + path);
    return lakedis::BipartiteGraph::load(in);
}

void warn_skipped(const lakedis::Lake& lake) {
    for (const auto& f : lake.stats.files)
        if (!f.ok) std::cerr << "warning: skipped " << f.path << ": " << f.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homograph detection toolkit for data lakes"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = LAKEDIS_THREADS env or hardware)");

    // ---- build ----
    auto* cmd_build = app.add_subcommand("build", "Scan a lake directory into a graph snapshot");
    std::string build_lake, build_out;
    bool build_keep_singletons = false;
    IngestFlags build_ingest;
    cmd_build->add_option("--lake", build_lake, "Directory of delimited table files")->required();
    cmd_build->add_option("--out", build_out, "Graph snapshot output file")->required();
    cmd_build->add_flag("--keep-singletons", build_keep_singletons,
                        "Keep values that appear in a single attribute");
    build_ingest.attach(cmd_build);

    // ---- stats ----
    auto* cmd_stats = app.add_subcommand("stats", "Print graph summary statistics");
    std::string stats_graph, stats_lake, stats_out;
    bool stats_json = false;
    IngestFlags stats_ingest;
    cmd_stats->add_option("--graph", stats_graph, "Graph snapshot file");
    cmd_stats->add_option("--lake", stats_lake, "Lake directory (built unpruned)");
    cmd_stats->add_flag("--json", stats_json, "Emit JSON");
    cmd_stats->add_option("--out", stats_out, "Output file (default stdout)");
    stats_ingest.attach(cmd_stats);

    // ---- detect ----
    auto* cmd_detect = app.add_subcommand("detect", "Rank homograph candidates by centrality");
    std::string det_graph, det_lake, det_out, det_measure = "bc-exact", det_gt,
                det_format = "csv";
    std::optional<uint64_t> det_sample_size;
    std::optional<double> det_sample_fraction;
    std::optional<uint64_t> det_seed;
    bool det_raw = false, det_keep_singletons = false, det_no_timestamp = false;
    std::optional<size_t> det_k;
    size_t det_min_degree = 0;
    IngestFlags det_ingest;
    cmd_detect->add_option("--graph", det_graph, "Graph snapshot file");
    cmd_detect->add_option("--lake", det_lake, "Lake directory");
    cmd_detect->add_option("--measure", det_measure,
                           "Measure: lcc | lcc-attr | bc-exact | bc-approx");
    cmd_detect->add_option("--sample-size", det_sample_size, "Pivots for bc-approx");
    cmd_detect->add_option("--sample-fraction", det_sample_fraction,
                           "Pivot fraction of nodes for bc-approx");
    cmd_detect->add_option("--seed", det_seed, "Seed (required for bc-approx)");
    cmd_detect->add_flag("--raw", det_raw, "Skip betweenness normalization");
    cmd_detect->add_option("-k,--top", det_k, "Keep only the top k candidates");
    cmd_detect->add_option("--min-degree", det_min_degree,
                           "Keep only values in at least this many attributes");
    cmd_detect->add_flag("--keep-singletons", det_keep_singletons,
                         "Skip singleton pruning when building from a lake");
    cmd_detect->add_option("--gt", det_gt, "Ground truth CSV for labeling the report");
    cmd_detect->add_option("--format", det_format, "Report format: csv | json");
    cmd_detect->add_flag("--no-timestamp", det_no_timestamp, "Omit the timestamp field");
    cmd_detect->add_option("--out", det_out, "Report output file")->required();
    det_ingest.attach(cmd_detect);

    // ---- generate ----
    auto* cmd_generate = app.add_subcommand("generate", "Generate a synthetic lake");
    std::string gen_spec, gen_preset, gen_out;
    uint64_t gen_seed = 1;
    std::string gen_delim = ",";
    cmd_generate->add_option("--spec", gen_spec, "Generator spec JSON file");
    cmd_generate->add_option("--preset", gen_preset,
                             "Built-in spec: small | approx | injection | scaling");
    cmd_generate->add_option("--seed", gen_seed, "Seed for --preset");
    cmd_generate->add_option("--out", gen_out, "Output directory")->required();
    cmd_generate->add_option("--delimiter", gen_delim, "Delimiter for written tables");

    // ---- inject ----
    auto* cmd_inject = app.add_subcommand("inject", "Inject synthetic homographs into a lake");
    std::string inj_lake, inj_umap, inj_out;
    lakedis::InjectionSpec ispec;
    bool inj_allow_numeric = false;
    IngestFlags inj_ingest;
    cmd_inject->add_option("--lake", inj_lake, "Lake directory")->required();
    cmd_inject->add_option("--umap", inj_umap, "Unionability map JSON")->required();
    cmd_inject->add_option("--out", inj_out, "Output directory")->required();
    cmd_inject->add_option("--count", ispec.count, "Homographs to inject")->required();
    cmd_inject->add_option("--meanings", ispec.meanings, "Meanings per injected homograph");
    cmd_inject->add_option("--min-cardinality", ispec.min_cardinality,
                           "Minimum |N(v)| of replaced values");
    cmd_inject->add_option("--min-length", ispec.min_length, "Minimum value length");
    cmd_inject->add_flag("--allow-numeric", inj_allow_numeric, "Allow number-like values");
    cmd_inject->add_option("--seed", ispec.seed, "Seed")->required();
    inj_ingest.attach(cmd_inject);

    // ---- evaluate ----
    auto* cmd_eval = app.add_subcommand("evaluate", "Score a ranked report against ground truth");
    std::string ev_report, ev_gt, ev_out, ev_format = "csv";
    std::vector<size_t> ev_ks;
    cmd_eval->add_option("--report", ev_report, "Ranked report CSV")->required();
    cmd_eval->add_option("--gt", ev_gt, "Ground truth CSV")->required();
    cmd_eval->add_option("-k,--at", ev_ks, "Evaluation cut(s); default: true homograph count");
    cmd_eval->add_option("--format", ev_format, "Output format: csv | json");
    cmd_eval->add_option("--out", ev_out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        int workers = lakedis::resolve_workers(threads);

        if (*cmd_build) {
            lakedis::Lake lake = lakedis::scan_lake(build_lake, build_ingest.options(workers));
            warn_skipped(lake);
            auto g = lakedis::BipartiteGraph::build(lake, build_ingest.options(workers).normalize);
            if (!build_keep_singletons) g = lakedis::prune_singletons(g);
            auto out = open_out(build_out);
            g.save(out);
        } else if (*cmd_stats) {
            if (stats_graph.empty() == stats_lake.empty())
                throw CLI::ValidationError("stats: give exactly one of --graph / --lake");
            lakedis::BipartiteGraph g;
            if (!stats_graph.empty()) {
                g = load_graph_file(stats_graph);
            } else {
                auto opts = stats_ingest.options(workers);
                g = lakedis::BipartiteGraph::build(lakedis::scan_lake(stats_lake, opts),
                                                   opts.normalize);
            }
            auto s = g.stats();
            std::ostringstream body;
            if (stats_json) {
                nlohmann::json j;
                j["value_nodes"] = s.value_nodes;
                j["attribute_nodes"] = s.attribute_nodes;
                j["edges"] = s.edges;
                j["min_attribute_cardinality"] = s.min_attribute_cardinality;
                j["max_attribute_cardinality"] = s.max_attribute_cardinality;
                nlohmann::json vh = nlohmann::json::object(), ah = nlohmann::json::object();
                for (auto [d, c] : s.value_degree_hist) vh[std::to_string(d)] = c;
                for (auto [d, c] : s.attribute_degree_hist) ah[std::to_string(d)] = c;
                j["value_degree_hist"] = vh;
                j["attribute_degree_hist"] = ah;
                body << j.dump(2) << '\n';
            } else {
                body << "value nodes      " << s.value_nodes << '\n'
                     << "attribute nodes  " << s.attribute_nodes << '\n'
                     << "edges            " << s.edges << '\n'
                     << "attr cardinality " << s.min_attribute_cardinality << ".."
                     << s.max_attribute_cardinality << '\n';
            }
            if (stats_out.empty()) {
                std::cout << body.str();
            } else {
                auto out = open_out(stats_out);
                out << body.str();
            }
        } else if (*cmd_detect) {
            if (det_graph.empty() == det_lake.empty())
                throw CLI::ValidationError("detect: give exactly one of --graph / --lake");
            lakedis::Measure measure = lakedis::measure_from_name(det_measure);
            if (measure == lakedis::Measure::bc_approx) {
                if (det_sample_size.has_value() == det_sample_fraction.has_value())
                    throw CLI::ValidationError(
                        "bc-approx needs exactly one of --sample-size / --sample-fraction");
                if (!det_seed)
                    throw CLI::ValidationError("bc-approx needs --seed (no silent entropy)");
            } else if (det_sample_size || det_sample_fraction) {
                throw CLI::ValidationError("--sample-size/--sample-fraction require bc-approx");
            }

            lakedis::BipartiteGraph g;
            if (!det_graph.empty()) {
                g = load_graph_file(det_graph);
            } else {
                auto opts = det_ingest.options(workers);
                lakedis::Lake lake = lakedis::scan_lake(det_lake, opts);
                warn_skipped(lake);
                g = lakedis::BipartiteGraph::build(lake, opts.normalize);
                if (!det_keep_singletons) g = lakedis::prune_singletons(g);
            }

            lakedis::ScoreTable scores;
            switch (measure) {
                case lakedis::Measure::lcc:
                    scores = lakedis::lcc_all(g, false, workers);
                    break;
                case lakedis::Measure::lcc_attr:
                    scores = lakedis::lcc_all(g, true, workers);
                    break;
                case lakedis::Measure::bc_exact:
                    scores = lakedis::bc_exact(g, !det_raw, workers);
                    break;
                case lakedis::Measure::bc_approx: {
                    uint64_t s = det_sample_size
                                     ? *det_sample_size
                                     : std::max<uint64_t>(
                                           1, static_cast<uint64_t>(std::llround(
                                                  *det_sample_fraction *
                                                  static_cast<double>(g.node_count()))));
                    s = std::min<uint64_t>(s, g.node_count());
                    scores = lakedis::bc_approx(g, s, *det_seed, !det_raw, workers);
                    break;
                }
            }

            lakedis::RankOptions ropts;
            ropts.min_attr_degree = det_min_degree;
            lakedis::RankedList ranked = lakedis::rank(g, scores, ropts);

            std::optional<lakedis::GroundTruth> gt;
            if (!det_gt.empty()) {
                std::ifstream in(det_gt);
                if (!in) throw std::runtime_error("cannot open ground truth " + det_gt);
                gt = lakedis::GroundTruth::load_csv(in);
            }
            lakedis::ReportOptions report_opts;
            report_opts.include_timestamp = !det_no_timestamp;
            report_opts.k = det_k;
            auto out = open_out(det_out);
            if (det_format == "json")
                lakedis::write_report_json(out, ranked, gt ? &*gt : nullptr, report_opts);
            else if (det_format == "csv")
                lakedis::write_report_csv(out, ranked, gt ? &*gt : nullptr, report_opts);
            else
                throw CLI::ValidationError("unknown --format: " + det_format);
        } else if (*cmd_generate) {
            if (gen_spec.empty() == gen_preset.empty())
                throw CLI::ValidationError("generate: give exactly one of --spec / --preset");
            lakedis::GeneratorSpec spec;
            if (!gen_spec.empty()) {
                std::ifstream in(gen_spec);
                if (!in) throw std::runtime_error("cannot open spec " + gen_spec);
                spec = lakedis::GeneratorSpec::from_json(in);
            } else if (gen_preset == "small") {
                spec = lakedis::small_benchmark_spec(gen_seed);
            } else if (gen_preset == "approx") {
                spec = lakedis::approx_benchmark_spec(gen_seed);
            } else if (gen_preset == "injection") {
                spec = lakedis::injection_benchmark_spec(gen_seed);
            } else if (gen_preset == "scaling") {
                spec = lakedis::scaling_benchmark_spec(gen_seed);
            } else {
                throw CLI::ValidationError("unknown preset: " + gen_preset);
            }
            if (gen_delim.size() != 1) throw CLI::ValidationError("--delimiter must be one char");
            lakedis::GeneratedLake gen = lakedis::generate_lake(spec);
            std::filesystem::create_directories(gen_out);
            lakedis::write_lake_csv(gen.lake, std::filesystem::path(gen_out) / "tables",
                                    gen_delim[0]);
            {
                auto out = open_out((std::filesystem::path(gen_out) / "umap.json").string());
                gen.umap.save_json(out);
            }
            {
                auto out =
                    open_out((std::filesystem::path(gen_out) / "ground_truth.csv").string());
                gen.gt.save_csv(out);
            }
            {
                auto out = open_out((std::filesystem::path(gen_out) / "spec.json").string());
                out << spec.to_json() << '\n';
            }
        } else if (*cmd_inject) {
            auto opts = inj_ingest.options(workers);
            lakedis::Lake lake = lakedis::scan_lake(inj_lake, opts);
            warn_skipped(lake);
            std::ifstream in(inj_umap);
            if (!in) throw std::runtime_error("cannot open unionability map " + inj_umap);
            auto umap = lakedis::UnionabilityMap::load_json(in);
            ispec.string_only = !inj_allow_numeric;
            lakedis::InjectionResult res =
                lakedis::inject_homographs(lake, umap, ispec, opts.normalize);
            std::filesystem::create_directories(inj_out);
            lakedis::write_lake_csv(res.lake, std::filesystem::path(inj_out) / "tables",
                                    opts.delimiter);
            {
                auto out =
                    open_out((std::filesystem::path(inj_out) / "ground_truth.csv").string());
                res.gt.save_csv(out);
            }
            {
                auto out = open_out((std::filesystem::path(inj_out) / "tokens.txt").string());
                for (const auto& t : res.tokens) out << t << '\n';
            }
        } else if (*cmd_eval) {
            std::ifstream rin(ev_report);
            if (!rin) throw std::runtime_error("cannot open report " + ev_report);
            lakedis::RankedList ranked = lakedis::load_report_csv(rin);
            std::ifstream gin(ev_gt);
            if (!gin) throw std::runtime_error("cannot open ground truth " + ev_gt);
            lakedis::GroundTruth gt = lakedis::GroundTruth::load_csv(gin);
            std::vector<size_t> ks = ev_ks;
            if (ks.empty())
                ks.push_back(std::min(gt.homograph_count(), ranked.entries.size()));
            lakedis::EvalReport rep = lakedis::evaluate(ranked, gt, ks);
            auto out = open_out(ev_out);
            if (ev_format == "json")
                rep.save_json(out);
            else if (ev_format == "csv")
                rep.save_csv(out);
            else
                throw CLI::ValidationError("unknown --format: " + ev_format);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
