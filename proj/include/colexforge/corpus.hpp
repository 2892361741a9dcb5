#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace colexforge {

/// One documented lect. `id` is namespaced as "<dataset>/<local id>".
struct Variety {
    std::string id;
    std::optional<std::string> glottocode;
    std::optional<std::string> family;
    std::string name;
    std::string dataset_id;

    friend bool operator==(const Variety&, const Variety&) = default;
};

struct Concept {
    std::string id;
    std::optional<std::string> concepticon_id;

    friend bool operator==(const Concept&, const Concept&) = default;
};

struct WordForm {
    std::string id;
    std::string variety_id;
    std::string concept_id;
    std::vector<std::string> segments;
    std::string value;
    // Original concept when this form was produced by concept expansion or renaming.
    std::optional<std::string> derived_from;

    friend bool operator==(const WordForm&, const WordForm&) = default;
};

struct Corpus {
    std::map<std::string, Variety> varieties;
    std::map<std::string, Concept> concepts;
    std::vector<WordForm> forms;
    std::vector<std::string> provenance;

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Family used for counting: the variety's family, or its own id when unclassified.
const std::string& family_key(const Variety& variety);

/// Splits a segments cell on whitespace.
std::vector<std::string> split_segments(std::string_view text);
std::string join_segments(const std::vector<std::string>& segments);

/// Sorts forms by (variety, concept, segments, direct-before-derived, id) and
/// removes exact (variety, concept, segments) duplicates, keeping the first.
/// Returns the number of removed forms.
std::size_t canonicalize(Corpus& corpus);

/// Writes the corpus as a CSV bundle directory: corpus.json, varieties.csv,
/// concepts.csv, forms.csv.
void write_corpus_bundle(const Corpus& corpus, const std::filesystem::path& dir);
Corpus read_corpus_bundle(const std::filesystem::path& dir);

}  // namespace colexforge
