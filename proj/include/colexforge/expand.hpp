#pragma once

#include "colexforge/corpus.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace colexforge {

/// Underspecified concepts mapped to their specific targets, plus one-for-one
/// concept renames. No target of any entry is itself a source.
struct ReplacementTable {
    std::map<std::string, std::vector<std::string>> expansions;
    std::map<std::string, std::string> renames;

    bool is_source(const std::string& concept_id) const {
        return expansions.contains(concept_id) || renames.contains(concept_id);
    }
};

/// Reads a CSV with columns `source` and `targets` (targets separated by ';').
/// A single target is a rename; two or more make an expansion.
ReplacementTable load_replacement_table(const std::filesystem::path& path);
ReplacementTable parse_replacement_table(std::string_view csv_text);

struct ExpansionReport {
    std::size_t input_forms = 0;
    std::size_t output_forms = 0;
    std::size_t expanded_source_forms = 0;
    std::size_t derived_forms = 0;
    std::size_t renamed_forms = 0;
    std::size_t dedup_removed = 0;
    std::map<std::string, std::size_t> per_source;
};

struct Expansion {
    Corpus corpus;
    ExpansionReport report;
};

/// Replaces every form of an expansion source by one copy per target and
/// re-maps rename sources; copies carry `derived_from`. Source concepts leave
/// the inventory. The result is canonicalized (see canonicalize()).
Expansion expand_corpus(const Corpus& corpus, const ReplacementTable& table, int threads = 0);

/// Number of forms carrying derived_from.
std::size_t count_derived(const Corpus& corpus);

std::string to_json(const ExpansionReport& report);

}  // namespace colexforge
