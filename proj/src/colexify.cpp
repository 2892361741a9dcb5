#include "colexforge/colexify.hpp"

#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"
#include "colexforge/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <omp.h>

namespace colexforge {
namespace {

std::atomic<std::uint64_t> g_form_keys{0};

// concept -> "every form carrying it under this key is derived"
using ConceptFlags = std::map<std::string, bool>;

void note_concept(ConceptFlags& flags, const WordForm& form) {
    auto [it, inserted] = flags.emplace(form.concept_id, form.derived_from.has_value());
    if (!inserted) it->second = it->second && form.derived_from.has_value();
}

ColexEvent make_event(const std::string& variety_id, std::string key, const ConceptFlags& flags) {
    ColexEvent event{variety_id, FormKey{std::move(key)}, {}, flags};
    event.concepts.reserve(flags.size());
    for (const auto& [concept_id, derived] : flags) event.concepts.push_back(concept_id);
    return event;
}

std::map<std::string, std::string> variety_families(const Corpus& corpus) {
    std::map<std::string, std::string> out;
    for (const auto& [id, variety] : corpus.varieties) out.emplace(id, family_key(variety));
    return out;
}

const std::string& family_of(const std::map<std::string, std::string>& families, const std::string& variety_id) {
    auto it = families.find(variety_id);
    if (it == families.end()) throw Error(ErrorKind::InconsistentInputs, "unknown variety " + variety_id);
    return it->second;
}

void build_index(ColexStore& store, const Corpus& corpus) {
    const auto families = variety_families(corpus);
    for (const auto& event : store.events) {
        const auto& family = family_of(families, event.variety_id);
        for (auto& pair : event_pairs(event)) {
            auto& entry = store.index[std::move(pair)];
            entry.varieties.insert(event.variety_id);
            entry.families.insert(family);
            ++entry.word_count;
        }
    }
}

void build_inventory(ColexStore& store, const Corpus& corpus) {
    const auto families = variety_families(corpus);
    std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> seen;
    for (const auto& form : corpus.forms) {
        auto& [varieties, fams] = seen[form.concept_id];
        varieties.insert(form.variety_id);
        fams.insert(family_of(families, form.variety_id));
    }
    for (const auto& [id, unused] : corpus.concepts) store.inventory[id] = {};
    for (const auto& [id, sets] : seen) store.inventory[id] = {sets.first.size(), sets.second.size()};
}

std::string_view derived_code(bool a, bool b) {
    if (a && b) return "both";
    if (a) return "a";
    if (b) return "b";
    return "none";
}

}  // namespace

bool is_boundary_token(std::string_view token) { return token == "+" || token == "_"; }

FormKey normalize_form(std::span<const std::string> segments) {
    g_form_keys.fetch_add(1, std::memory_order_relaxed);
    FormKey key;
    for (const auto& token : segments) {
        if (token.empty() || is_boundary_token(token)) continue;
        if (!key.canonical.empty()) key.canonical.push_back(' ');
        key.canonical += token;
    }
    if (key.canonical.empty()) {
        std::string shown;
        for (const auto& token : segments) shown += "[" + token + "]";
        throw Error(ErrorKind::EmptyAfterNormalization, "segments " + shown);
    }
    return key;
}

std::uint64_t form_key_computations() { return g_form_keys.load(); }
void reset_form_key_computations() { g_form_keys = 0; }

ConceptPair ConceptPair::of(const std::string& x, const std::string& y) {
    return x < y ? ConceptPair{x, y} : ConceptPair{y, x};
}

std::vector<ColexEvent> extract_variety(std::span<const WordForm> forms) {
    if (forms.empty()) return {};
    const auto& variety_id = forms.front().variety_id;

    std::unordered_map<std::string, ConceptFlags> groups;
    groups.reserve(forms.size());
    for (const auto& form : forms) {
        if (form.variety_id != variety_id) {
            throw Error(ErrorKind::InconsistentInputs,
                        "extract_variety: forms of " + variety_id + " and " + form.variety_id + " mixed");
        }
        note_concept(groups[normalize_form(form.segments).canonical], form);
    }

    std::vector<ColexEvent> events;
    for (auto& [key, flags] : groups) {
        if (flags.size() >= 2) events.push_back(make_event(variety_id, key, flags));
    }
    std::sort(events.begin(), events.end(),
              [](const ColexEvent& a, const ColexEvent& b) { return a.form_key < b.form_key; });
    return events;
}

std::vector<ConceptPair> event_pairs(const ColexEvent& event) {
    std::vector<ConceptPair> pairs;
    const auto& c = event.concepts;
    pairs.reserve(c.size() * (c.size() - 1) / 2);
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) pairs.push_back(ConceptPair::of(c[i], c[j]));
    }
    return pairs;
}

ColexStore build_store(const Corpus& corpus, int threads) {
    // Contiguous per-variety slices; reuse the corpus storage when it is already grouped.
    const auto by_variety = [](const WordForm& a, const WordForm& b) { return a.variety_id < b.variety_id; };
    std::vector<WordForm> sorted_copy;
    std::span<const WordForm> forms = corpus.forms;
    if (!std::is_sorted(forms.begin(), forms.end(), by_variety)) {
        sorted_copy = corpus.forms;
        std::stable_sort(sorted_copy.begin(), sorted_copy.end(), by_variety);
        forms = sorted_copy;
    }
    std::vector<std::span<const WordForm>> slices;
    for (std::size_t start = 0; start < forms.size();) {
        std::size_t end = start + 1;
        while (end < forms.size() && forms[end].variety_id == forms[start].variety_id) ++end;
        slices.push_back(forms.subspan(start, end - start));
        start = end;
    }

    std::vector<std::vector<ColexEvent>> per_variety(slices.size());
    std::vector<std::exception_ptr> failures(slices.size());
    const auto n = static_cast<std::ptrdiff_t>(slices.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_threads(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            per_variety[i] = extract_variety(slices[i]);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    ColexStore store;
    for (auto& events : per_variety) {
        for (auto& event : events) store.events.push_back(std::move(event));
    }
    build_index(store, corpus);
    build_inventory(store, corpus);
    return store;
}

ColexStore build_store_serial(const Corpus& corpus) {
    std::map<std::string, std::map<std::string, ConceptFlags>> grouped;
    for (const auto& form : corpus.forms) {
        note_concept(grouped[form.variety_id][normalize_form(form.segments).canonical], form);
    }
    ColexStore store;
    for (const auto& [variety_id, keys] : grouped) {
        for (const auto& [key, flags] : keys) {
            if (flags.size() >= 2) store.events.push_back(make_event(variety_id, key, flags));
        }
    }
    build_index(store, corpus);
    build_inventory(store, corpus);
    return store;
}

std::string store_csv_text(const ColexStore& store) {
    using Row = std::tuple<std::string, std::string, std::string, std::string, std::string_view>;
    std::vector<Row> rows;
    for (const auto& event : store.events) {
        for (const auto& pair : event_pairs(event)) {
            rows.emplace_back(pair.a, pair.b, event.variety_id, event.form_key.canonical,
                              derived_code(event.derived_flags.at(pair.a), event.derived_flags.at(pair.b)));
        }
    }
    std::sort(rows.begin(), rows.end());

    std::ostringstream out;
    csv::write_row(out, {"concept_a", "concept_b", "variety_id", "form_key", "derived"});
    for (const auto& [a, b, variety, key, derived] : rows) {
        csv::write_row(out, {a, b, variety, key, std::string(derived)});
    }
    return out.str();
}

void write_store_csv(const ColexStore& store, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << store_csv_text(store);
}

ColexStore read_store_csv(const std::filesystem::path& path, const Corpus& corpus) {
    const auto table = csv::read_file(path);
    const auto ca = table.require_column("concept_a", path.string());
    const auto cb = table.require_column("concept_b", path.string());
    const auto cv = table.require_column("variety_id", path.string());
    const auto ck = table.require_column("form_key", path.string());
    const auto cd = table.require_column("derived", path.string());

    std::map<std::pair<std::string, std::string>, ConceptFlags> grouped;
    std::map<std::pair<std::string, std::string>, std::size_t> row_counts;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto where = path.string() + " row " + std::to_string(r + 1);
        if (!corpus.varieties.contains(row[cv])) {
            throw Error(ErrorKind::InconsistentInputs, where + ": unknown variety " + row[cv]);
        }
        for (auto col : {ca, cb}) {
            if (!corpus.concepts.contains(row[col])) {
                throw Error(ErrorKind::InconsistentInputs, where + ": unknown concept " + row[col]);
            }
        }
        if (row[ca] >= row[cb]) throw Error(ErrorKind::InconsistentInputs, where + ": pair not canonical");
        const auto& d = row[cd];
        if (d != "none" && d != "a" && d != "b" && d != "both") {
            throw Error(ErrorKind::InconsistentInputs, where + ": bad derived code '" + d + "'");
        }
        const std::pair<std::string, std::string> event_key{row[cv], row[ck]};
        auto& flags = grouped[event_key];
        flags[row[ca]] = d == "a" || d == "both";
        flags[row[cb]] = d == "b" || d == "both";
        ++row_counts[event_key];
    }

    ColexStore store;
    for (const auto& [event_key, flags] : grouped) {
        const auto k = flags.size();
        if (row_counts[event_key] != k * (k - 1) / 2) {
            throw Error(ErrorKind::InconsistentInputs,
                        path.string() + ": rows for " + event_key.first + " '" + event_key.second +
                            "' are not a full pairwise closure");
        }
        store.events.push_back(make_event(event_key.first, event_key.second, flags));
    }
    build_index(store, corpus);
    build_inventory(store, corpus);
    return store;
}

}  // namespace colexforge
