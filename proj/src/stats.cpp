#include "colexforge/stats.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace colexforge {

NetworkStats compute_stats(const Corpus& corpus, const ColexNetwork& network,
                           const std::optional<Partition>& partition) {
    NetworkStats s;
    s.datasets = corpus.provenance.size();
    s.varieties = corpus.varieties.size();

    std::set<std::string> glottocodes, families;
    for (const auto& [id, variety] : corpus.varieties) {
        if (variety.glottocode) glottocodes.insert(*variety.glottocode);
        families.insert(family_key(variety));
    }
    s.languages = glottocodes.size();
    s.families = families.size();

    s.words = corpus.forms.size();
    std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> per_concept;
    for (const auto& form : corpus.forms) {
        if (!form.segments.empty()) ++s.transcriptions;
        auto it = corpus.varieties.find(form.variety_id);
        if (it == corpus.varieties.end()) continue;
        auto& [languages, fams] = per_concept[form.concept_id];
        if (it->second.glottocode) languages.insert(*it->second.glottocode);
        fams.insert(family_key(it->second));
    }
    if (s.varieties) s.words_per_variety = static_cast<double>(s.words) / static_cast<double>(s.varieties);

    s.concepts = network.nodes().size();
    s.colexified_concepts = colexified_concepts(network);
    if (s.concepts) {
        double languages_sum = 0.0, families_sum = 0.0;
        for (const auto& node : network.nodes()) {
            auto it = per_concept.find(node.id);
            if (it == per_concept.end()) continue;
            languages_sum += static_cast<double>(it->second.first.size());
            families_sum += static_cast<double>(it->second.second.size());
        }
        s.languages_per_concept = languages_sum / static_cast<double>(s.concepts);
        s.families_per_concept = families_sum / static_cast<double>(s.concepts);
    }

    s.colexifications = network.edges().size();
    s.avg_degree = average_degree(network);
    s.avg_weighted_degree = average_weighted_degree(network);
    if (partition) {
        const auto cs = community_stats(*partition, network);
        s.communities = cs.count;
        s.concepts_per_community = cs.mean_size;
    }
    return s;
}

std::string to_json(const NetworkStats& s) {
    nlohmann::ordered_json j;
    j["datasets"] = s.datasets;
    j["varieties"] = s.varieties;
    j["languages"] = s.languages;
    j["families"] = s.families;
    j["words"] = s.words;
    j["transcriptions"] = s.transcriptions;
    j["words_per_variety"] = s.words_per_variety;
    j["concepts"] = s.concepts;
    j["colexified_concepts"] = s.colexified_concepts;
    j["languages_per_concept"] = s.languages_per_concept;
    j["families_per_concept"] = s.families_per_concept;
    j["colexifications"] = s.colexifications;
    j["avg_degree"] = s.avg_degree;
    j["avg_weighted_degree"] = s.avg_weighted_degree;
    j["communities"] = s.communities;
    j["concepts_per_community"] = s.concepts_per_community;
    return j.dump(2);
}

std::string table_text(const NetworkStats& s) {
    std::ostringstream out;
    auto row = [&out](std::string_view label, const std::string& value) {
        out << std::left << std::setw(26) << label << value << '\n';
    };
    auto whole = [](double v) { return std::to_string(static_cast<long long>(std::llround(v))); };
    auto one_decimal = [](double v) {
        std::ostringstream o;
        o << std::fixed << std::setprecision(1) << v;
        return o.str();
    };
    row("Datasets", std::to_string(s.datasets));
    row("Varieties", std::to_string(s.varieties));
    row("Languages", std::to_string(s.languages));
    row("Families", std::to_string(s.families));
    row("Words", std::to_string(s.words));
    row("Transcriptions", std::to_string(s.transcriptions));
    row("Words per Variety", whole(s.words_per_variety));
    row("Concepts", std::to_string(s.concepts));
    row("Colexified Concepts", std::to_string(s.colexified_concepts));
    row("Languages per Concept", whole(s.languages_per_concept));
    row("Families per Concept", whole(s.families_per_concept));
    row("Colexifications", std::to_string(s.colexifications));
    row("Average Degree", whole(s.avg_degree));
    row("Average Weighted Degree", whole(s.avg_weighted_degree));
    row("Communities", std::to_string(s.communities));
    row("Concepts per Community", one_decimal(s.concepts_per_community));
    return out.str();
}

DiffReport diff_networks(const ColexNetwork& a, const ColexNetwork& b) {
    std::map<std::pair<std::string, std::string>, std::size_t> weights_b;
    for (const auto& e : b.edges()) weights_b[{e.concept_a, e.concept_b}] = e.weight();

    DiffReport report;
    for (const auto& e : a.edges()) {
        auto it = weights_b.find({e.concept_a, e.concept_b});
        if (it == weights_b.end()) {
            ++report.unique_to_a;
            continue;
        }
        ++report.shared_edges;
        if (e.weight() > it->second) ++report.a_dominant_shared;
        if (it->second > e.weight()) ++report.b_dominant_shared;
    }
    report.unique_to_b = b.edges().size() - report.shared_edges;
    return report;
}

std::string to_json(const DiffReport& r) {
    nlohmann::ordered_json j;
    j["shared_edges"] = r.shared_edges;
    j["unique_to_a"] = r.unique_to_a;
    j["unique_to_b"] = r.unique_to_b;
    j["a_dominant_shared"] = r.a_dominant_shared;
    j["b_dominant_shared"] = r.b_dominant_shared;
    return j.dump(2);
}

}  // namespace colexforge
