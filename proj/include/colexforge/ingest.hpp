#pragma once

#include "colexforge/corpus.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace colexforge {

/// A CSV table reference inside dataset metadata. `columns` maps logical
/// column names (e.g. "segments") to the header used in the file.
struct TableSpec {
    std::string file;
    std::map<std::string, std::string> columns;

    friend bool operator==(const TableSpec&, const TableSpec&) = default;
};

struct DatasetDescriptor {
    std::string id;
    std::filesystem::path path;
    std::string metadata_file;
    TableSpec form_table;
    TableSpec language_table;
    TableSpec parameter_table;
};

/// Parses `<dir>/<metadata_file>` and checks that every declared table exists
/// and that the required logical columns are mapped.
///
/// Required columns: FormTable {id, variety, concept, segments};
/// LanguageTable {id}; ParameterTable {id}. Optional: FormTable.value,
/// LanguageTable.{name, glottocode, family}, ParameterTable.{gloss,
/// concepticon_id}. When `gloss` is mapped it becomes the concept id;
/// otherwise the local parameter id is used.
DatasetDescriptor read_descriptor(const std::filesystem::path& metadata_path);

/// Every `*metadata.json` found directly in `root` or in its immediate
/// subdirectories, sorted by path.
std::vector<std::filesystem::path> discover_datasets(const std::filesystem::path& root);

Corpus load_dataset(const DatasetDescriptor& descriptor);

/// Loads the descriptors in parallel and folds them with merge_corpora.
Corpus load_datasets(std::span<const DatasetDescriptor> descriptors, int threads = 0);

Corpus merge_corpora(std::span<const Corpus> parts);

enum class IssueKind {
    DanglingVariety,
    DanglingConcept,
    DuplicateFormId,
    DuplicateTriple,
    EmptySegments,
    EmptyVariety,
};

struct ValidationIssue {
    IssueKind kind;
    std::string subject;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool empty() const { return issues.empty(); }
    std::size_t count(IssueKind kind) const;
};

ValidationReport validate_corpus(const Corpus& corpus);

}  // namespace colexforge
