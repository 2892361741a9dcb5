#pragma once

#include "colexforge/corpus.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace colexforge {

/// Normalized, space-joined segment sequence. Two forms of one variety
/// colexify iff their keys are equal.
struct FormKey {
    std::string canonical;

    friend auto operator<=>(const FormKey&, const FormKey&) = default;
};

/// Morpheme-boundary markers that never take part in a form key.
bool is_boundary_token(std::string_view token);

/// Drops morpheme-boundary tokens ("+", "_") and joins the rest with single
/// spaces. Case is preserved. Throws EmptyAfterNormalization when nothing is left.
FormKey normalize_form(std::span<const std::string> segments);

/// Number of normalize_form calls made by the extraction kernels since the
/// last reset. Used to check that extraction touches each form exactly once.
std::uint64_t form_key_computations();
void reset_form_key_computations();

/// Unordered concept pair stored with the lexicographically smaller id first.
struct ConceptPair {
    std::string a;
    std::string b;

    static ConceptPair of(const std::string& x, const std::string& y);

    friend auto operator<=>(const ConceptPair&, const ConceptPair&) = default;
};

struct ColexEvent {
    std::string variety_id;
    FormKey form_key;
    std::vector<std::string> concepts;  // sorted, distinct, size >= 2
    std::map<std::string, bool> derived_flags;

    friend bool operator==(const ColexEvent&, const ColexEvent&) = default;
};

struct PairAttestation {
    std::set<std::string> varieties;
    std::set<std::string> families;
    std::size_t word_count = 0;  // attesting events

    friend bool operator==(const PairAttestation&, const PairAttestation&) = default;
};

struct ConceptCoverage {
    std::size_t varieties = 0;
    std::size_t families = 0;

    friend bool operator==(const ConceptCoverage&, const ConceptCoverage&) = default;
};

struct ColexStore {
    std::vector<ColexEvent> events;  // ordered by (variety, form key)
    std::map<ConceptPair, PairAttestation> index;
    // Effective concept inventory with attestation coverage.
    std::map<std::string, ConceptCoverage> inventory;

    friend bool operator==(const ColexStore&, const ColexStore&) = default;
};

/// Groups one variety's forms by FormKey in a single pass and emits one event
/// per key carrying two or more distinct concepts, ordered by key.
std::vector<ColexEvent> extract_variety(std::span<const WordForm> forms);

/// All C(k,2) pairs of an event.
std::vector<ConceptPair> event_pairs(const ColexEvent& event);

/// Per-variety extraction runs in parallel; the result does not depend on the
/// thread count or on the order of forms in the corpus.
ColexStore build_store(const Corpus& corpus, int threads = 0);
/// Single-threaded reference for build_store.
ColexStore build_store_serial(const Corpus& corpus);

/// Store rows: concept_a, concept_b, variety_id, form_key, derived.
void write_store_csv(const ColexStore& store, const std::filesystem::path& path);
std::string store_csv_text(const ColexStore& store);
/// Rebuilds a store from its CSV rows. The corpus supplies families, the
/// concept inventory and per-concept derivation flags.
ColexStore read_store_csv(const std::filesystem::path& path, const Corpus& corpus);

}  // namespace colexforge
