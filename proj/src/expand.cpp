#include "colexforge/expand.hpp"

#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"
#include "colexforge/parallel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <omp.h>

namespace colexforge {
namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_targets(std::string_view cell) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= cell.size()) {
        auto end = cell.find(';', start);
        if (end == std::string_view::npos) end = cell.size();
        auto target = trim(cell.substr(start, end - start));
        if (!target.empty() && std::find(out.begin(), out.end(), target) == out.end()) {
            out.push_back(std::move(target));
        }
        start = end + 1;
    }
    return out;
}

// Expands or renames one form; untouched forms are copied through.
void expand_form(const WordForm& form, const ReplacementTable& table, std::vector<WordForm>& out) {
    if (auto it = table.expansions.find(form.concept_id); it != table.expansions.end()) {
        for (const auto& target : it->second) {
            WordForm copy = form;
            copy.id = form.id + "#" + target;
            copy.concept_id = target;
            copy.derived_from = form.concept_id;
            out.push_back(std::move(copy));
        }
        return;
    }
    if (auto it = table.renames.find(form.concept_id); it != table.renames.end()) {
        WordForm copy = form;
        copy.concept_id = it->second;
        copy.derived_from = form.concept_id;
        out.push_back(std::move(copy));
        return;
    }
    out.push_back(form);
}

}  // namespace

ReplacementTable parse_replacement_table(std::string_view csv_text) {
    const auto table = csv::parse(csv_text, "replacement table");
    const auto source_col = table.require_column("source", "replacement table");
    const auto targets_col = table.require_column("targets", "replacement table");

    ReplacementTable out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto where = "replacement table row " + std::to_string(r + 1);
        const auto source = trim(table.rows[r][source_col]);
        const auto& cell = table.rows[r][targets_col];
        if (source.empty()) throw Error(ErrorKind::MalformedCsv, where + ": empty source");
        if (out.is_source(source)) throw Error(ErrorKind::DuplicateSource, where + ": " + source);

        auto targets = split_targets(cell);
        if (targets.empty()) throw Error(ErrorKind::MalformedCsv, where + ": no targets for " + source);
        if (targets.size() == 1) {
            if (cell.find(';') != std::string::npos) {
                throw Error(ErrorKind::SingletonExpansionWithExpansionSyntax,
                            where + ": '" + cell + "' lists a single distinct target for " + source);
            }
            out.renames.emplace(source, targets.front());
        } else {
            out.expansions.emplace(source, std::move(targets));
        }
    }

    auto check_target = [&out](const std::string& source, const std::string& target) {
        if (out.is_source(target)) {
            throw Error(ErrorKind::ChainedExpansion, source + " -> " + target + ", which is itself replaced");
        }
    };
    for (const auto& [source, targets] : out.expansions) {
        for (const auto& target : targets) check_target(source, target);
    }
    for (const auto& [source, target] : out.renames) check_target(source, target);
    return out;
}

ReplacementTable load_replacement_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingFile, path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_replacement_table(buffer.str());
}

Expansion expand_corpus(const Corpus& corpus, const ReplacementTable& table, int threads) {
    const int workers = resolve_threads(threads);
    std::vector<std::vector<WordForm>> chunks(static_cast<std::size_t>(workers));
    const auto n = static_cast<std::ptrdiff_t>(corpus.forms.size());

#pragma omp parallel num_threads(workers)
    {
        auto& local = chunks[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) expand_form(corpus.forms[static_cast<std::size_t>(i)], table, local);
    }

    Expansion result;
    auto& out = result.corpus;
    out.varieties = corpus.varieties;
    out.provenance = corpus.provenance;
    for (const auto& [id, concept_entry] : corpus.concepts) {
        if (!table.is_source(id)) out.concepts.emplace(id, concept_entry);
    }
    for (auto& chunk : chunks) {
        for (auto& form : chunk) out.forms.push_back(std::move(form));
    }
    for (const auto& form : out.forms) {
        if (!out.concepts.contains(form.concept_id)) out.concepts.emplace(form.concept_id, Concept{form.concept_id, {}});
    }

    auto& report = result.report;
    report.input_forms = corpus.forms.size();
    report.expanded_source_forms = static_cast<std::size_t>(
        std::count_if(corpus.forms.begin(), corpus.forms.end(),
                      [&](const WordForm& f) { return table.expansions.contains(f.concept_id); }));
    report.dedup_removed = canonicalize(out);
    report.output_forms = out.forms.size();
    for (const auto& form : out.forms) {
        if (!form.derived_from) continue;
        if (table.expansions.contains(*form.derived_from)) {
            ++report.derived_forms;
            ++report.per_source[*form.derived_from];
        } else {
            ++report.renamed_forms;
        }
    }
    return result;
}

std::size_t count_derived(const Corpus& corpus) {
    return static_cast<std::size_t>(std::count_if(corpus.forms.begin(), corpus.forms.end(),
                                                  [](const WordForm& f) { return f.derived_from.has_value(); }));
}

std::string to_json(const ExpansionReport& report) {
    nlohmann::ordered_json j;
    j["input_forms"] = report.input_forms;
    j["output_forms"] = report.output_forms;
    j["expanded_source_forms"] = report.expanded_source_forms;
    j["derived_forms"] = report.derived_forms;
    j["renamed_forms"] = report.renamed_forms;
    j["dedup_removed"] = report.dedup_removed;
    j["per_source"] = nlohmann::ordered_json::object();
    for (const auto& [source, count] : report.per_source) j["per_source"][source] = count;
    return j.dump(2);
}

}  // namespace colexforge
