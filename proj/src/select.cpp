#include "colexforge/select.hpp"

#include "colexforge/error.hpp"
#include "colexforge/parallel.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>
#include <omp.h>

namespace colexforge {
namespace {

using Attestations = std::unordered_map<std::string, std::unordered_set<std::string>>;

std::vector<RankedConcept> to_counts(const Corpus& corpus, const std::map<std::string, std::size_t>& counts) {
    std::vector<RankedConcept> out;
    std::map<std::string, std::size_t> all = counts;
    for (const auto& [id, unused] : corpus.concepts) all.emplace(id, 0);
    out.reserve(all.size());
    for (const auto& [id, count] : all) out.push_back({id, count});
    return out;
}

}  // namespace

void SelectionConfig::validate() const {
    if (variety_min_concepts < 1) {
        throw Error(ErrorKind::InvalidConfig, "variety_min_concepts must be >= 1");
    }
    if (concept_cap < variety_min_concepts) {
        throw Error(ErrorKind::InvalidConfig, "concept_cap (" + std::to_string(concept_cap) +
                                                  ") must be >= variety_min_concepts (" +
                                                  std::to_string(variety_min_concepts) + ")");
    }
}

std::vector<RankedConcept> count_concept_occurrence_serial(const Corpus& corpus) {
    std::map<std::string, std::unordered_set<std::string>> seen;
    for (const auto& form : corpus.forms) seen[form.concept_id].insert(form.variety_id);
    std::map<std::string, std::size_t> counts;
    for (const auto& [id, varieties] : seen) counts[id] = varieties.size();
    return to_counts(corpus, counts);
}

std::vector<RankedConcept> count_concept_occurrence(const Corpus& corpus, int threads) {
    const int workers = resolve_threads(threads);
    std::vector<Attestations> partial(static_cast<std::size_t>(workers));
    const auto n = static_cast<std::ptrdiff_t>(corpus.forms.size());

#pragma omp parallel num_threads(workers)
    {
        auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto& form = corpus.forms[static_cast<std::size_t>(i)];
            local[form.concept_id].insert(form.variety_id);
        }
    }

    Attestations merged = std::move(partial.front());
    for (std::size_t t = 1; t < partial.size(); ++t) {
        for (auto& [id, varieties] : partial[t]) merged[id].merge(varieties);
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& [id, varieties] : merged) counts[id] = varieties.size();
    return to_counts(corpus, counts);
}

std::vector<RankedConcept> rank_concepts(const Corpus& corpus, std::size_t cap, int threads) {
    auto ranked = count_concept_occurrence(corpus, threads);
    std::sort(ranked.begin(), ranked.end(), [](const RankedConcept& a, const RankedConcept& b) {
        if (a.variety_count != b.variety_count) return a.variety_count > b.variety_count;
        return a.concept_id < b.concept_id;
    });
    if (ranked.size() > cap) ranked.resize(cap);
    return ranked;
}

Selection apply_selection(const Corpus& corpus, const SelectionConfig& config, int threads) {
    config.validate();

    Selection result;
    auto& report = result.report;
    report.input_forms = corpus.forms.size();
    report.ranked_concepts = rank_concepts(corpus, config.concept_cap, threads);
    for (const auto& entry : report.ranked_concepts) report.kept_concepts.insert(entry.concept_id);

    // (1) restrict forms to kept concepts
    std::vector<const WordForm*> restricted;
    restricted.reserve(corpus.forms.size());
    std::map<std::string, std::set<std::string>> coverage;
    for (const auto& form : corpus.forms) {
        if (!report.kept_concepts.contains(form.concept_id)) continue;
        restricted.push_back(&form);
        coverage[form.variety_id].insert(form.concept_id);
    }

    // (2) drop varieties below the coverage threshold
    auto& out = result.corpus;
    out.provenance = corpus.provenance;
    for (const auto& [id, variety] : corpus.varieties) {
        auto it = coverage.find(id);
        const std::size_t covered = it == coverage.end() ? 0 : it->second.size();
        if (covered >= config.variety_min_concepts) {
            out.varieties.emplace(id, variety);
        } else {
            report.dropped_varieties.push_back({id, covered});
        }
    }
    if (out.varieties.empty()) {
        throw Error(ErrorKind::EmptySelection, "no variety covers " + std::to_string(config.variety_min_concepts) +
                                                   " of the " + std::to_string(report.kept_concepts.size()) +
                                                   " kept concepts");
    }

    // (3) effective inventory from the surviving forms
    for (const WordForm* form : restricted) {
        if (!out.varieties.contains(form->variety_id)) continue;
        out.forms.push_back(*form);
        report.effective_concepts.insert(form->concept_id);
    }
    for (const auto& id : report.effective_concepts) {
        auto it = corpus.concepts.find(id);
        out.concepts.emplace(id, it != corpus.concepts.end() ? it->second : Concept{id, {}});
    }
    canonicalize(out);
    report.output_forms = out.forms.size();
    return result;
}

std::string to_json(const SelectionReport& report) {
    nlohmann::ordered_json j;
    j["input_forms"] = report.input_forms;
    j["output_forms"] = report.output_forms;
    j["kept_concepts"] = report.kept_concepts.size();
    j["effective_concepts"] = report.effective_concepts.size();
    j["ranked_concepts"] = nlohmann::ordered_json::array();
    for (const auto& entry : report.ranked_concepts) {
        j["ranked_concepts"].push_back({{"concept", entry.concept_id}, {"varieties", entry.variety_count}});
    }
    j["dropped_varieties"] = nlohmann::ordered_json::array();
    for (const auto& entry : report.dropped_varieties) {
        j["dropped_varieties"].push_back({{"variety", entry.variety_id}, {"coverage", entry.coverage}});
    }
    j["effective_concept_ids"] = report.effective_concepts;
    return j.dump(2);
}

}  // namespace colexforge
