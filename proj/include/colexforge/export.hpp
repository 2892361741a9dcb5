#pragma once

#include "colexforge/colexify.hpp"
#include "colexforge/corpus.hpp"
#include "colexforge/network.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace colexforge {

// Node table: concept_id, variety_coverage, family_coverage, community
std::string nodes_csv_text(const ColexNetwork& network);
// Edge table: concept_a, concept_b, family_weight, variety_count, word_count
std::string edges_csv_text(const ColexNetwork& network);
void write_tables(const ColexNetwork& network, const std::filesystem::path& nodes_path,
                  const std::filesystem::path& edges_path);

enum class StructuralValue { Present, Absent, Missing };

std::string_view to_string(StructuralValue value);

struct StructuralParameter {
    std::string id;  // "<concept_a>--<concept_b>"
    std::string concept_a;
    std::string concept_b;
    std::size_t family_weight = 0;
    std::size_t variety_count = 0;
};

/// One parameter per network edge; one value per (variety, parameter).
struct StructuralDataset {
    std::vector<StructuralParameter> parameters;
    std::vector<std::string> varieties;
    std::map<std::pair<std::string, std::string>, StructuralValue> values;  // (variety, parameter)

    StructuralValue at(const std::string& variety_id, const std::string& parameter_id) const;
};

/// missing: the variety has no form for at least one endpoint concept;
/// present: the variety attests the pair in the store; absent otherwise.
StructuralDataset build_structural(const Corpus& corpus, const ColexStore& store, const ColexNetwork& network);

/// Writes parameters.csv, values.csv and structural-metadata.json into `dir`.
void write_structural(const StructuralDataset& dataset, const std::filesystem::path& dir);

}  // namespace colexforge
