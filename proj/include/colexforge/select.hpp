#pragma once

#include "colexforge/corpus.hpp"

#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace colexforge {

struct SelectionConfig {
    static constexpr std::size_t unlimited = std::numeric_limits<std::size_t>::max();

    std::size_t concept_cap = 1800;
    std::size_t variety_min_concepts = 180;

    /// Throws InvalidConfig unless concept_cap >= variety_min_concepts >= 1.
    void validate() const;
};

struct RankedConcept {
    std::string concept_id;
    std::size_t variety_count = 0;

    friend bool operator==(const RankedConcept&, const RankedConcept&) = default;
};

struct DroppedVariety {
    std::string variety_id;
    std::size_t coverage = 0;

    friend bool operator==(const DroppedVariety&, const DroppedVariety&) = default;
};

struct SelectionReport {
    std::vector<RankedConcept> ranked_concepts;
    std::set<std::string> kept_concepts;
    std::vector<DroppedVariety> dropped_varieties;
    std::set<std::string> effective_concepts;
    std::size_t input_forms = 0;
    std::size_t output_forms = 0;

    friend bool operator==(const SelectionReport&, const SelectionReport&) = default;
};

struct Selection {
    Corpus corpus;
    SelectionReport report;
};

/// Distinct attesting varieties per concept (parallel kernel).
std::vector<RankedConcept> count_concept_occurrence(const Corpus& corpus, int threads = 0);
/// Reference implementation of the same count.
std::vector<RankedConcept> count_concept_occurrence_serial(const Corpus& corpus);

/// Concepts by distinct-variety count descending, ties by id ascending,
/// truncated to `cap`.
std::vector<RankedConcept> rank_concepts(const Corpus& corpus, std::size_t cap, int threads = 0);

/// Keep the top concepts, drop varieties below the coverage threshold
/// (inclusive), then recompute the effective concept inventory. One pass.
Selection apply_selection(const Corpus& corpus, const SelectionConfig& config, int threads = 0);

std::string to_json(const SelectionReport& report);

}  // namespace colexforge
