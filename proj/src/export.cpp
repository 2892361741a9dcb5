#include "colexforge/export.hpp"

#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace colexforge {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

}  // namespace

std::string nodes_csv_text(const ColexNetwork& network) {
    csv::Table table{{"concept_id", "variety_coverage", "family_coverage", "community"}, {}};
    for (const auto& node : network.nodes()) {
        table.rows.push_back({node.id, std::to_string(node.variety_coverage), std::to_string(node.family_coverage),
                              node.community ? std::to_string(*node.community) : std::string{}});
    }
    return csv::to_string(table);
}

std::string edges_csv_text(const ColexNetwork& network) {
    csv::Table table{{"concept_a", "concept_b", "family_weight", "variety_count", "word_count"}, {}};
    for (const auto& edge : network.edges()) {
        table.rows.push_back({edge.concept_a, edge.concept_b, std::to_string(edge.weight()),
                              std::to_string(edge.varieties.size()), std::to_string(edge.word_count)});
    }
    return csv::to_string(table);
}

void write_tables(const ColexNetwork& network, const std::filesystem::path& nodes_path,
                  const std::filesystem::path& edges_path) {
    write_text(nodes_path, nodes_csv_text(network));
    write_text(edges_path, edges_csv_text(network));
}

std::string_view to_string(StructuralValue value) {
    switch (value) {
        case StructuralValue::Present: return "present";
        case StructuralValue::Absent: return "absent";
        case StructuralValue::Missing: return "missing";
    }
    return "missing";
}

StructuralValue StructuralDataset::at(const std::string& variety_id, const std::string& parameter_id) const {
    auto it = values.find({variety_id, parameter_id});
    if (it == values.end()) {
        throw Error(ErrorKind::InconsistentInputs, "no value for " + variety_id + " / " + parameter_id);
    }
    return it->second;
}

StructuralDataset build_structural(const Corpus& corpus, const ColexStore& store, const ColexNetwork& network) {
    std::map<std::string, std::set<std::string>> elicited;  // variety -> concepts with a form
    for (const auto& form : corpus.forms) elicited[form.variety_id].insert(form.concept_id);

    StructuralDataset dataset;
    for (const auto& [id, unused] : corpus.varieties) dataset.varieties.push_back(id);

    for (const auto& edge : network.edges()) {
        auto entry = store.index.find(ConceptPair{edge.concept_a, edge.concept_b});
        if (entry == store.index.end()) {
            throw Error(ErrorKind::InconsistentInputs,
                        "edge " + edge.concept_a + " -- " + edge.concept_b + " has no store entry");
        }
        const auto& attested = entry->second.varieties;
        StructuralParameter parameter{edge.concept_a + "--" + edge.concept_b, edge.concept_a, edge.concept_b,
                                      edge.weight(), edge.varieties.size()};
        for (const auto& variety : dataset.varieties) {
            const auto& concepts = elicited[variety];
            const bool has_both = concepts.contains(edge.concept_a) && concepts.contains(edge.concept_b);
            const bool present = attested.contains(variety);
            if (present && !has_both) {
                throw Error(ErrorKind::InconsistentInputs,
                            variety + " attests " + parameter.id + " without forms for both concepts");
            }
            dataset.values[{variety, parameter.id}] =
                !has_both ? StructuralValue::Missing : present ? StructuralValue::Present : StructuralValue::Absent;
        }
        dataset.parameters.push_back(std::move(parameter));
    }
    return dataset;
}

void write_structural(const StructuralDataset& dataset, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

    csv::Table parameters{{"id", "concept_a", "concept_b", "family_weight", "variety_count"}, {}};
    for (const auto& p : dataset.parameters) {
        parameters.rows.push_back(
            {p.id, p.concept_a, p.concept_b, std::to_string(p.family_weight), std::to_string(p.variety_count)});
    }
    csv::write_file(dir / "parameters.csv", parameters);

    csv::Table values{{"id", "variety_id", "parameter_id", "value"}, {}};
    for (const auto& [key, value] : dataset.values) {
        const auto& [variety, parameter] = key;
        values.rows.push_back({variety + ":" + parameter, variety, parameter, std::string(to_string(value))});
    }
    csv::write_file(dir / "values.csv", values);

    nlohmann::ordered_json meta;
    meta["id"] = "colexifications-structural";
    meta["tables"]["ParameterTable"] = {
        {"file", "parameters.csv"},
        {"columns", {{"id", "id"}, {"concept_a", "concept_a"}, {"concept_b", "concept_b"},
                     {"family_weight", "family_weight"}, {"variety_count", "variety_count"}}}};
    meta["tables"]["ValueTable"] = {
        {"file", "values.csv"},
        {"columns", {{"id", "id"}, {"variety", "variety_id"}, {"parameter", "parameter_id"}, {"value", "value"}}}};
    meta["codes"] = {"present", "absent", "missing"};
    write_text(dir / "structural-metadata.json", meta.dump(2) + "\n");
}

}  // namespace colexforge
