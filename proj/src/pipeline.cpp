#include "colexforge/pipeline.hpp"

#include "colexforge/colexify.hpp"
#include "colexforge/community.hpp"
#include "colexforge/expand.hpp"
#include "colexforge/export.hpp"
#include "colexforge/gml.hpp"
#include "colexforge/ingest.hpp"
#include "colexforge/log.hpp"
#include "colexforge/network.hpp"
#include "colexforge/stats.hpp"

#include <chrono>
#include <fstream>
#include <functional>

namespace colexforge {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    return p.is_relative() && !base.empty() ? base / p : p;
}

void write_json(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << text << '\n';
}

// Runs one stage, records its timing and counts, and tags failures with the stage name.
class StageRunner {
public:
    explicit StageRunner(RunResult& result) : result_(result) {}

    void operator()(const std::string& name, const std::function<nlohmann::json()>& body) {
        log::info("stage " + name);
        const auto start = std::chrono::steady_clock::now();
        nlohmann::json counts;
        try {
            counts = body();
        } catch (const StageError&) {
            throw;
        } catch (const Error& e) {
            throw StageError(name, e);
        } catch (const std::exception& e) {
            throw StageError(name, Error(ErrorKind::IoError, e.what()));
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        result_.stages.push_back({name, elapsed.count(), std::move(counts)});
    }

private:
    RunResult& result_;
};

}  // namespace

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    PipelineConfig config;
    try {
        config.dataset_dir = resolve(base_dir, j.at("dataset_dir").get<std::string>());
        if (j.contains("replacement_table") && !j["replacement_table"].is_null()) {
            config.replacement_table = resolve(base_dir, j["replacement_table"].get<std::string>());
        }
        config.selection.concept_cap = j.value("concept_cap", config.selection.concept_cap);
        config.selection.variety_min_concepts = j.value("min_concepts", config.selection.variety_min_concepts);
        config.min_families = j.value("min_families", config.min_families);
        config.seed = j.value("seed", config.seed);
        config.output_dir = resolve(base_dir, j.value("output_dir", std::string("out")));
        config.threads = j.value("threads", config.threads);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
    }
    config.selection.validate();
    return config;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MissingFile, path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
    }
    return from_json(j, path.parent_path());
}

RunResult run_all(const PipelineConfig& config) {
    RunResult result;
    StageRunner stage(result);
    const auto& out = config.output_dir;
    std::filesystem::create_directories(out);

    Corpus ingested, expanded, selected;
    ColexStore store;
    ColexNetwork network;
    Partition partition;

    stage("ingest", [&] {
        const auto metadata = discover_datasets(config.dataset_dir);
        if (metadata.empty()) {
            throw Error(ErrorKind::MissingFile, "no dataset metadata under " + config.dataset_dir.string());
        }
        std::vector<DatasetDescriptor> descriptors;
        for (const auto& path : metadata) descriptors.push_back(read_descriptor(path));
        ingested = load_datasets(descriptors, config.threads);
        write_corpus_bundle(ingested, out / "corpus");
        return nlohmann::json{{"datasets", ingested.provenance.size()},
                              {"varieties", ingested.varieties.size()},
                              {"concepts", ingested.concepts.size()},
                              {"forms", ingested.forms.size()}};
    });

    stage("expand", [&] {
        ExpansionReport report;
        if (config.replacement_table) {
            auto expansion = expand_corpus(ingested, load_replacement_table(*config.replacement_table), config.threads);
            expanded = std::move(expansion.corpus);
            report = expansion.report;
        } else {
            expanded = ingested;
            report.input_forms = report.output_forms = expanded.forms.size();
        }
        write_corpus_bundle(expanded, out / "expanded");
        write_json(out / "expansion.json", to_json(report));
        return nlohmann::json{{"forms_in", report.input_forms},
                              {"forms_out", report.output_forms},
                              {"derived_forms", report.derived_forms},
                              {"renamed_forms", report.renamed_forms},
                              {"dedup_removed", report.dedup_removed}};
    });

    stage("select", [&] {
        auto selection = apply_selection(expanded, config.selection, config.threads);
        selected = std::move(selection.corpus);
        write_corpus_bundle(selected, out / "selected");
        write_json(out / "selection.json", to_json(selection.report));
        return nlohmann::json{{"forms_in", selection.report.input_forms},
                              {"forms_out", selection.report.output_forms},
                              {"kept_concepts", selection.report.kept_concepts.size()},
                              {"effective_concepts", selection.report.effective_concepts.size()},
                              {"dropped_varieties", selection.report.dropped_varieties.size()},
                              {"varieties_out", selected.varieties.size()}};
    });

    stage("colexify", [&] {
        store = build_store(selected, config.threads);
        write_store_csv(store, out / "store.csv");
        return nlohmann::json{{"events", store.events.size()}, {"concept_pairs", store.index.size()}};
    });

    stage("network", [&] {
        network = build_network(store, config.min_families);
        return nlohmann::json{{"min_families", config.min_families},
                              {"edges_before_threshold", store.index.size()},
                              {"edges_after_threshold", network.edges().size()},
                              {"nodes", network.nodes().size()},
                              {"colexified_concepts", colexified_concepts(network)}};
    });

    stage("communities", [&] {
        DetectOptions options;
        options.threads = config.threads;
        auto detection = detect_communities(network, config.seed, options);
        partition = std::move(detection.partition);
        write_partition_csv(partition, out / "partition.csv");
        const auto cs = community_stats(partition, network);
        return nlohmann::json{{"seed", config.seed},
                              {"communities", cs.count},
                              {"codelength_bits", detection.codelength.total_bits}};
    });

    stage("export", [&] {
        apply_partition(network, partition);
        write_gml(network, out / "network.gml");
        write_tables(network, out / "nodes.csv", out / "edges.csv");
        const auto structural = build_structural(selected, store, network);
        write_structural(structural, out / "structural");
        write_json(out / "stats.json", to_json(compute_stats(selected, network, partition)));
        return nlohmann::json{{"parameters", structural.parameters.size()}, {"values", structural.values.size()}};
    });

    nlohmann::ordered_json manifest;
    manifest["config"] = {{"dataset_dir", config.dataset_dir.string()},
                          {"replacement_table", config.replacement_table ? config.replacement_table->string() : ""},
                          {"concept_cap", config.selection.concept_cap},
                          {"min_concepts", config.selection.variety_min_concepts},
                          {"min_families", config.min_families},
                          {"seed", config.seed},
                          {"threads", config.threads}};
    manifest["stages"] = nlohmann::ordered_json::array();
    for (const auto& s : result.stages) {
        manifest["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}, {"counts", s.counts}});
    }
    manifest["artifacts"] = {"corpus/",      "expanded/",     "expansion.json", "selected/",   "selection.json",
                             "store.csv",    "partition.csv", "network.gml",    "nodes.csv",   "edges.csv",
                             "structural/",  "stats.json"};
    write_json(out / "manifest.json", manifest.dump(2));
    result.manifest = manifest;
    return result;
}

}  // namespace colexforge
