// colexforge: command-line driver for the colexification pipeline.

#include "colexforge/colexify.hpp"
#include "colexforge/community.hpp"
#include "colexforge/expand.hpp"
#include "colexforge/export.hpp"
#include "colexforge/gml.hpp"
#include "colexforge/ingest.hpp"
#include "colexforge/log.hpp"
#include "colexforge/network.hpp"
#include "colexforge/pipeline.hpp"
#include "colexforge/select.hpp"
#include "colexforge/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace cf = colexforge;
namespace fs = std::filesystem;

namespace {

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cf::Error(cf::ErrorKind::IoError, "cannot write " + path);
    out << text << '\n';
}

cf::ColexNetwork network_from(const cf::Corpus& corpus, const std::string& store_path, std::size_t min_families,
                              cf::ColexStore* store_out = nullptr) {
    auto store = cf::read_store_csv(store_path, corpus);
    auto network = cf::build_network(store, min_families);
    if (store_out) *store_out = std::move(store);
    return network;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"colexforge - build colexification networks from CLDF-style word lists"};
    app.require_subcommand(1);

    int threads = 0;
    bool verbose = false;
    bool quiet = false;
    app.add_option("--threads", threads, "Worker threads for parallel stages (0 = OpenMP default)");
    app.add_flag("-v,--verbose", verbose, "Log progress to stderr");
    app.add_flag("-q,--quiet", quiet, "Suppress warnings");

    // ingest
    std::string datasets_dir, ingest_out;
    auto* ingest = app.add_subcommand("ingest", "Load and merge every dataset under a directory");
    ingest->add_option("--datasets", datasets_dir, "Directory of datasets (each with a *metadata.json)")->required();
    ingest->add_option("--out", ingest_out, "Output corpus bundle directory")->required();

    // expand
    std::string expand_corpus_dir, table_path, expand_out, expand_report;
    auto* expand = app.add_subcommand("expand", "Expand underspecified concepts and apply renames");
    expand->add_option("--corpus", expand_corpus_dir, "Input corpus bundle")->required();
    expand->add_option("--table", table_path, "Replacement table CSV (source,targets)")->required();
    expand->add_option("--out", expand_out, "Output corpus bundle directory")->required();
    expand->add_option("--report", expand_report, "Write the expansion report JSON here (default stdout)");

    // select
    std::string select_corpus_dir, select_out, select_report;
    cf::SelectionConfig selection;
    auto* select = app.add_subcommand("select", "Keep the most frequent concepts and well-covered varieties");
    select->add_option("--corpus", select_corpus_dir, "Input corpus bundle")->required();
    select->add_option("--concept-cap", selection.concept_cap, "Concepts kept after ranking")->capture_default_str();
    select->add_option("--min-concepts", selection.variety_min_concepts, "Minimum kept concepts per variety")
        ->capture_default_str();
    select->add_option("--out", select_out, "Output corpus bundle directory")->required();
    select->add_option("--report", select_report, "Write the selection report JSON here (default stdout)");

    // colexify
    std::string colexify_corpus_dir, store_out;
    auto* colexify = app.add_subcommand("colexify", "Extract colexifications into a store CSV");
    colexify->add_option("--corpus", colexify_corpus_dir, "Selected corpus bundle")->required();
    colexify->add_option("--out", store_out, "Store CSV path")->required();

    // network
    std::string net_corpus_dir, net_store, net_gml;
    std::size_t net_min_families = 3;
    auto* network_cmd = app.add_subcommand("network", "Build the thresholded network and report its size");
    network_cmd->add_option("--corpus", net_corpus_dir, "Selected corpus bundle")->required();
    network_cmd->add_option("--store", net_store, "Store CSV")->required();
    network_cmd->add_option("--min-families", net_min_families, "Family threshold per edge")->capture_default_str();
    network_cmd->add_option("--gml", net_gml, "Also write the network (without communities) as GML");

    // communities
    std::string com_corpus_dir, com_store, com_out;
    std::size_t com_min_families = 3;
    std::uint64_t seed = 42;
    int trials = cf::DetectOptions{}.trials;
    auto* communities = app.add_subcommand("communities", "Detect communities with the map equation");
    communities->add_option("--corpus", com_corpus_dir, "Selected corpus bundle")->required();
    communities->add_option("--store", com_store, "Store CSV")->required();
    communities->add_option("--min-families", com_min_families, "Family threshold per edge")->capture_default_str();
    communities->add_option("--seed", seed, "Random seed")->capture_default_str();
    communities->add_option("--trials", trials, "Optimizer restarts")->capture_default_str();
    communities->add_option("--out", com_out, "Partition CSV path")->required();

    // export
    std::string ex_corpus_dir, ex_store, ex_partition, ex_gml, ex_nodes, ex_edges, ex_structural, ex_stats;
    std::size_t ex_min_families = 3;
    auto* export_cmd = app.add_subcommand("export", "Write GML, node/edge tables and the structural dataset");
    export_cmd->add_option("--corpus", ex_corpus_dir, "Selected corpus bundle")->required();
    export_cmd->add_option("--store", ex_store, "Store CSV")->required();
    export_cmd->add_option("--partition", ex_partition, "Partition CSV");
    export_cmd->add_option("--min-families", ex_min_families, "Family threshold per edge")->capture_default_str();
    export_cmd->add_option("--gml", ex_gml, "GML output path");
    export_cmd->add_option("--nodes", ex_nodes, "Node table CSV path");
    export_cmd->add_option("--edges", ex_edges, "Edge table CSV path");
    export_cmd->add_option("--structural", ex_structural, "Structural dataset directory");
    export_cmd->add_option("--stats", ex_stats, "Statistics JSON path");

    // stats
    std::string st_corpus_dir, st_store, st_partition, st_format = "json";
    std::size_t st_min_families = 3;
    auto* stats_cmd = app.add_subcommand("stats", "Print summary statistics");
    stats_cmd->add_option("--corpus", st_corpus_dir, "Selected corpus bundle")->required();
    stats_cmd->add_option("--store", st_store, "Store CSV")->required();
    stats_cmd->add_option("--partition", st_partition, "Partition CSV");
    stats_cmd->add_option("--min-families", st_min_families, "Family threshold per edge")->capture_default_str();
    stats_cmd->add_option("--format", st_format, "json or table")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();

    // diff
    std::string gml_a, gml_b;
    auto* diff = app.add_subcommand("diff", "Compare the edge sets of two GML networks");
    diff->add_option("a", gml_a, "First network (GML)")->required();
    diff->add_option("b", gml_b, "Second network (GML)")->required();

    // run-all
    std::string config_path, run_out;
    std::optional<std::uint64_t> run_seed;
    auto* run_all = app.add_subcommand("run-all", "Run every stage from a JSON config");
    run_all->add_option("--config", config_path, "Pipeline config JSON")->required();
    run_all->add_option("--out", run_out, "Override output_dir from the config");
    run_all->add_option("--seed", run_seed, "Override the config seed");

    CLI11_PARSE(app, argc, argv);

    cf::log::set_level(quiet ? cf::log::Level::Quiet : verbose ? cf::log::Level::Info : cf::log::Level::Warn);

    try {
        if (*ingest) {
            std::vector<cf::DatasetDescriptor> descriptors;
            for (const auto& path : cf::discover_datasets(datasets_dir)) descriptors.push_back(cf::read_descriptor(path));
            if (descriptors.empty()) {
                throw cf::Error(cf::ErrorKind::MissingFile, "no dataset metadata under " + datasets_dir);
            }
            const auto corpus = cf::load_datasets(descriptors, threads);
            cf::write_corpus_bundle(corpus, ingest_out);
            const auto report = cf::validate_corpus(corpus);
            for (const auto& issue : report.issues) cf::log::warn(issue.subject + ": " + issue.detail);
        } else if (*expand) {
            const auto corpus = cf::read_corpus_bundle(expand_corpus_dir);
            auto result = cf::expand_corpus(corpus, cf::load_replacement_table(table_path), threads);
            cf::write_corpus_bundle(result.corpus, expand_out);
            emit(cf::to_json(result.report), expand_report);
        } else if (*select) {
            const auto corpus = cf::read_corpus_bundle(select_corpus_dir);
            auto result = cf::apply_selection(corpus, selection, threads);
            cf::write_corpus_bundle(result.corpus, select_out);
            emit(cf::to_json(result.report), select_report);
        } else if (*colexify) {
            const auto corpus = cf::read_corpus_bundle(colexify_corpus_dir);
            cf::write_store_csv(cf::build_store(corpus, threads), store_out);
        } else if (*network_cmd) {
            const auto corpus = cf::read_corpus_bundle(net_corpus_dir);
            cf::ColexStore store;
            const auto network = network_from(corpus, net_store, net_min_families, &store);
            if (!net_gml.empty()) cf::write_gml(network, net_gml);
            nlohmann::ordered_json j{{"min_families", net_min_families},
                                     {"edges_before_threshold", store.index.size()},
                                     {"edges_after_threshold", network.edges().size()},
                                     {"nodes", network.nodes().size()},
                                     {"colexified_concepts", cf::colexified_concepts(network)}};
            emit(j.dump(2), "");
        } else if (*communities) {
            const auto corpus = cf::read_corpus_bundle(com_corpus_dir);
            const auto network = network_from(corpus, com_store, com_min_families);
            cf::DetectOptions options;
            options.trials = trials;
            options.threads = threads;
            const auto detection = cf::detect_communities(network, seed, options);
            cf::write_partition_csv(detection.partition, com_out);
            const auto cs = cf::community_stats(detection.partition, network);
            nlohmann::ordered_json j{{"communities", cs.count},
                                     {"concepts_per_community", cs.mean_size},
                                     {"codelength_bits", detection.codelength.total_bits},
                                     {"index_bits", detection.codelength.index_bits},
                                     {"module_bits", detection.codelength.module_bits}};
            emit(j.dump(2), "");
        } else if (*export_cmd) {
            const auto corpus = cf::read_corpus_bundle(ex_corpus_dir);
            cf::ColexStore store;
            auto network = network_from(corpus, ex_store, ex_min_families, &store);
            std::optional<cf::Partition> partition;
            if (!ex_partition.empty()) {
                partition = cf::read_partition_csv(ex_partition);
                cf::apply_partition(network, *partition);
            }
            if (!ex_gml.empty()) cf::write_gml(network, ex_gml);
            if (!ex_nodes.empty() || !ex_edges.empty()) {
                if (ex_nodes.empty() || ex_edges.empty()) {
                    throw cf::Error(cf::ErrorKind::InvalidConfig, "--nodes and --edges must be given together");
                }
                cf::write_tables(network, ex_nodes, ex_edges);
            }
            if (!ex_structural.empty()) {
                cf::write_structural(cf::build_structural(corpus, store, network), ex_structural);
            }
            if (!ex_stats.empty()) emit(cf::to_json(cf::compute_stats(corpus, network, partition)), ex_stats);
        } else if (*stats_cmd) {
            const auto corpus = cf::read_corpus_bundle(st_corpus_dir);
            const auto network = network_from(corpus, st_store, st_min_families);
            std::optional<cf::Partition> partition;
            if (!st_partition.empty()) partition = cf::read_partition_csv(st_partition);
            const auto stats = cf::compute_stats(corpus, network, partition);
            std::cout << (st_format == "table" ? cf::table_text(stats) : cf::to_json(stats) + "\n");
        } else if (*diff) {
            emit(cf::to_json(cf::diff_networks(cf::read_gml(gml_a), cf::read_gml(gml_b))), "");
        } else if (*run_all) {
            auto config = cf::PipelineConfig::load(config_path);
            if (!run_out.empty()) config.output_dir = run_out;
            if (run_seed) config.seed = *run_seed;
            if (threads > 0) config.threads = threads;
            const auto result = cf::run_all(config);
            std::cout << result.manifest.dump(2) << '\n';
        }
    } catch (const cf::StageError& e) {
        std::cerr << "colexforge: " << e.what() << '\n';
        return 1;
    } catch (const cf::Error& e) {
        std::cerr << "colexforge: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "colexforge: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
