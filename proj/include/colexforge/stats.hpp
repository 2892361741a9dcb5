#pragma once

#include "colexforge/community.hpp"
#include "colexforge/corpus.hpp"
#include "colexforge/network.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace colexforge {

/// Summary figures for one network build. Averages are kept at full
/// precision; table_text() rounds them for display.
struct NetworkStats {
    std::size_t datasets = 0;
    std::size_t varieties = 0;
    std::size_t languages = 0;  // distinct glottocodes
    std::size_t families = 0;
    std::size_t words = 0;
    std::size_t transcriptions = 0;
    double words_per_variety = 0.0;
    std::size_t concepts = 0;
    std::size_t colexified_concepts = 0;
    double languages_per_concept = 0.0;
    double families_per_concept = 0.0;
    std::size_t colexifications = 0;
    double avg_degree = 0.0;
    double avg_weighted_degree = 0.0;
    std::size_t communities = 0;
    double concepts_per_community = 0.0;
};

NetworkStats compute_stats(const Corpus& corpus, const ColexNetwork& network,
                           const std::optional<Partition>& partition);

std::string to_json(const NetworkStats& stats);
std::string table_text(const NetworkStats& stats);

struct DiffReport {
    std::size_t shared_edges = 0;
    std::size_t unique_to_a = 0;
    std::size_t unique_to_b = 0;
    std::size_t a_dominant_shared = 0;  // shared edges where A has more families
    std::size_t b_dominant_shared = 0;

    friend bool operator==(const DiffReport&, const DiffReport&) = default;
};

DiffReport diff_networks(const ColexNetwork& a, const ColexNetwork& b);

std::string to_json(const DiffReport& report);

}  // namespace colexforge
