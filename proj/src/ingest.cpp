#include "colexforge/ingest.hpp"

#include "colexforge/colexify.hpp"
#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"
#include "colexforge/log.hpp"
#include "colexforge/parallel.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <optional>
#include <set>

#include <json.hpp>
#include <omp.h>

namespace colexforge {
namespace {

struct RequiredColumns {
    const char* table;
    std::vector<const char*> columns;
};

const RequiredColumns kForm{"FormTable", {"id", "variety", "concept", "segments"}};
const RequiredColumns kLanguage{"LanguageTable", {"id"}};
const RequiredColumns kParameter{"ParameterTable", {"id"}};

TableSpec parse_table_spec(const nlohmann::json& tables, const RequiredColumns& required,
                           const std::filesystem::path& dir, const std::string& context) {
    if (!tables.contains(required.table)) {
        throw Error(ErrorKind::MalformedMetadata, context + ": no table '" + required.table + "'");
    }
    const auto& entry = tables.at(required.table);
    TableSpec spec;
    try {
        spec.file = entry.at("file").get<std::string>();
        for (const auto& [logical, header] : entry.at("columns").items()) {
            spec.columns[logical] = header.get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedMetadata, context + ": table '" + required.table + "': " + e.what());
    }
    for (const char* column : required.columns) {
        if (!spec.columns.contains(column)) {
            throw Error(ErrorKind::MalformedMetadata,
                        context + ": table '" + required.table + "' does not map column '" + column + "'");
        }
    }
    if (!std::filesystem::is_regular_file(dir / spec.file)) {
        throw Error(ErrorKind::MissingFile, (dir / spec.file).string() + " (declared in " + context + ")");
    }
    return spec;
}

// Resolves the logical-to-header column mapping against a parsed table.
class ColumnMap {
public:
    ColumnMap(const csv::Table& table, const TableSpec& spec) : table_(table), spec_(spec) {}

    std::size_t required(const std::string& logical) const {
        return table_.require_column(spec_.columns.at(logical), spec_.file);
    }
    std::optional<std::size_t> optional(const std::string& logical) const {
        auto it = spec_.columns.find(logical);
        if (it == spec_.columns.end()) return std::nullopt;
        return table_.require_column(it->second, spec_.file);
    }
    const std::string& header(const std::string& logical) const { return spec_.columns.at(logical); }

private:
    const csv::Table& table_;
    const TableSpec& spec_;
};

std::optional<std::string> cell(const csv::Row& row, std::optional<std::size_t> index) {
    if (!index || row[*index].empty()) return std::nullopt;
    return row[*index];
}

std::string row_ref(const TableSpec& spec, std::size_t r) {
    return spec.file + " row " + std::to_string(r + 1) + " (line " + std::to_string(r + 2) + ")";
}

bool empty_after_normalization(const std::vector<std::string>& segments) {
    return std::all_of(segments.begin(), segments.end(), [](const std::string& t) { return is_boundary_token(t); });
}

}  // namespace

DatasetDescriptor read_descriptor(const std::filesystem::path& metadata_path) {
    std::ifstream in(metadata_path);
    if (!in) throw Error(ErrorKind::MissingFile, metadata_path.string());

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedMetadata, metadata_path.string() + ": " + e.what());
    }
    const std::string context = metadata_path.string();
    if (!meta.is_object() || !meta.contains("id") || !meta["id"].is_string() || meta["id"].get<std::string>().empty()) {
        throw Error(ErrorKind::MalformedMetadata, context + ": missing string 'id'");
    }
    if (!meta.contains("tables") || !meta["tables"].is_object()) {
        throw Error(ErrorKind::MalformedMetadata, context + ": missing object 'tables'");
    }

    DatasetDescriptor d;
    d.id = meta["id"].get<std::string>();
    d.path = metadata_path.parent_path();
    d.metadata_file = metadata_path.filename().string();
    const auto& tables = meta["tables"];
    d.form_table = parse_table_spec(tables, kForm, d.path, context);
    d.language_table = parse_table_spec(tables, kLanguage, d.path, context);
    d.parameter_table = parse_table_spec(tables, kParameter, d.path, context);
    return d;
}

std::vector<std::filesystem::path> discover_datasets(const std::filesystem::path& root) {
    if (!std::filesystem::is_directory(root)) throw Error(ErrorKind::MissingFile, root.string());

    std::vector<std::filesystem::path> found;
    auto scan = [&found](const std::filesystem::path& dir) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().filename().string().ends_with("metadata.json")) {
                found.push_back(entry.path());
            }
        }
    };
    scan(root);
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (entry.is_directory()) scan(entry.path());
    }
    std::sort(found.begin(), found.end());
    return found;
}

Corpus load_dataset(const DatasetDescriptor& d) {
    Corpus corpus;
    corpus.provenance.push_back(d.id);

    // Parameters: local id -> concept id.
    std::map<std::string, std::string> parameter_concept;
    {
        const auto table = csv::read_file(d.path / d.parameter_table.file);
        const ColumnMap columns(table, d.parameter_table);
        const auto id = columns.required("id");
        const auto gloss = columns.optional("gloss");
        const auto concepticon = columns.optional("concepticon_id");
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            const auto& local = row[id];
            if (local.empty()) {
                throw Error(ErrorKind::MalformedCsv, row_ref(d.parameter_table, r) + ": empty id");
            }
            const std::string concept_id = cell(row, gloss).value_or(local);
            if (!parameter_concept.emplace(local, concept_id).second) {
                throw Error(ErrorKind::DuplicateId, row_ref(d.parameter_table, r) + ": parameter " + local);
            }
            auto& concept_entry = corpus.concepts[concept_id];
            concept_entry.id = concept_id;
            if (!concept_entry.concepticon_id) concept_entry.concepticon_id = cell(row, concepticon);
        }
    }

    // Languages: local id -> namespaced variety id.
    std::map<std::string, std::string> variety_ids;
    {
        const auto table = csv::read_file(d.path / d.language_table.file);
        const ColumnMap columns(table, d.language_table);
        const auto id = columns.required("id");
        const auto name = columns.optional("name");
        const auto glottocode = columns.optional("glottocode");
        const auto family = columns.optional("family");
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            const auto& local = row[id];
            if (local.empty()) {
                throw Error(ErrorKind::MalformedCsv, row_ref(d.language_table, r) + ": empty id");
            }
            Variety v{d.id + "/" + local, cell(row, glottocode), cell(row, family), cell(row, name).value_or(local),
                      d.id};
            if (!variety_ids.emplace(local, v.id).second) {
                throw Error(ErrorKind::DuplicateId, row_ref(d.language_table, r) + ": language " + local);
            }
            corpus.varieties.emplace(v.id, std::move(v));
        }
    }

    {
        const auto table = csv::read_file(d.path / d.form_table.file);
        const ColumnMap columns(table, d.form_table);
        const auto id = columns.required("id");
        const auto variety = columns.required("variety");
        const auto concept_col = columns.required("concept");
        const auto segments = columns.required("segments");
        const auto value = columns.optional("value");
        std::set<std::string> form_ids;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            if (!form_ids.insert(row[id]).second) {
                throw Error(ErrorKind::DuplicateId, row_ref(d.form_table, r) + ": form " + row[id]);
            }
            auto v = variety_ids.find(row[variety]);
            if (v == variety_ids.end()) {
                throw Error(ErrorKind::DanglingReference, row_ref(d.form_table, r) + ", column " +
                                                              columns.header("variety") + ": unknown language '" +
                                                              row[variety] + "'");
            }
            auto c = parameter_concept.find(row[concept_col]);
            if (c == parameter_concept.end()) {
                throw Error(ErrorKind::DanglingReference, row_ref(d.form_table, r) + ", column " +
                                                              columns.header("concept") + ": unknown parameter '" +
                                                              row[concept_col] + "'");
            }
            auto tokens = split_segments(row[segments]);
            if (empty_after_normalization(tokens)) {
                log::warn(d.id + ": dropping " + row_ref(d.form_table, r) + " with empty segments");
                continue;
            }
            corpus.forms.push_back({d.id + "/" + row[id], v->second, c->second, std::move(tokens),
                                    cell(row, value).value_or(std::string{}), std::nullopt});
        }
    }

    if (const auto removed = canonicalize(corpus)) {
        log::info(d.id + ": removed " + std::to_string(removed) + " duplicate forms");
    }
    return corpus;
}

Corpus load_datasets(std::span<const DatasetDescriptor> descriptors, int threads) {
    const auto n = static_cast<std::ptrdiff_t>(descriptors.size());
    std::vector<Corpus> parts(descriptors.size());
    std::vector<std::exception_ptr> failures(descriptors.size());

#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            parts[i] = load_dataset(descriptors[i]);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return merge_corpora(parts);
}

Corpus merge_corpora(std::span<const Corpus> parts) {
    Corpus merged;
    std::size_t total_forms = 0;
    for (const auto& part : parts) total_forms += part.forms.size();
    merged.forms.reserve(total_forms);

    for (const auto& part : parts) {
        for (const auto& [id, variety] : part.varieties) merged.varieties.emplace(id, variety);
        for (const auto& [id, concept_entry] : part.concepts) {
            auto [it, inserted] = merged.concepts.emplace(id, concept_entry);
            if (inserted || !concept_entry.concepticon_id) continue;
            // Keep the smallest concepticon id so the result is order-insensitive.
            auto& existing = it->second.concepticon_id;
            if (!existing || *concept_entry.concepticon_id < *existing) existing = concept_entry.concepticon_id;
        }
        merged.forms.insert(merged.forms.end(), part.forms.begin(), part.forms.end());
        merged.provenance.insert(merged.provenance.end(), part.provenance.begin(), part.provenance.end());
    }
    canonicalize(merged);
    return merged;
}

std::size_t ValidationReport::count(IssueKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(issues.begin(), issues.end(), [kind](const ValidationIssue& i) { return i.kind == kind; }));
}

ValidationReport validate_corpus(const Corpus& corpus) {
    ValidationReport report;
    std::map<std::string, std::size_t> form_id_count;
    std::set<std::tuple<std::string, std::string, std::vector<std::string>>> triples;
    std::set<std::string> varieties_with_forms;

    for (const auto& form : corpus.forms) {
        if (!corpus.varieties.contains(form.variety_id)) {
            report.issues.push_back({IssueKind::DanglingVariety, form.id, form.variety_id});
        } else {
            varieties_with_forms.insert(form.variety_id);
        }
        if (!corpus.concepts.contains(form.concept_id)) {
            report.issues.push_back({IssueKind::DanglingConcept, form.id, form.concept_id});
        }
        if (empty_after_normalization(form.segments)) {
            report.issues.push_back({IssueKind::EmptySegments, form.id, join_segments(form.segments)});
        }
        if (++form_id_count[form.id] == 2) {
            report.issues.push_back({IssueKind::DuplicateFormId, form.id, {}});
        }
        if (!triples.emplace(form.variety_id, form.concept_id, form.segments).second) {
            report.issues.push_back({IssueKind::DuplicateTriple, form.id,
                                     form.variety_id + " " + form.concept_id + " " + join_segments(form.segments)});
        }
    }
    for (const auto& [id, variety] : corpus.varieties) {
        if (!varieties_with_forms.contains(id)) report.issues.push_back({IssueKind::EmptyVariety, id, {}});
    }
    return report;
}

}  // namespace colexforge
