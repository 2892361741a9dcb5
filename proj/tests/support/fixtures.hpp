#pragma once

#include "colexforge/corpus.hpp"
#include "colexforge/network.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace fixtures {

namespace fs = std::filesystem;
using colexforge::ColexEdge;
using colexforge::ColexNetwork;
using colexforge::ConceptNode;
using colexforge::Corpus;
using colexforge::WordForm;

inline fs::path data_dir() { return COLEXFORGE_DATA_DIR; }
inline fs::path golden_dir() { return COLEXFORGE_GOLDEN_DIR; }
inline fs::path fixture_dir() { return COLEXFORGE_FIXTURE_DIR; }

class TempDir {
public:
    explicit TempDir(const std::string& tag = "cf") {
        static std::uint64_t counter = 0;
        std::random_device rd;
        path_ = fs::temp_directory_path() /
                (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

struct VarietySpec {
    std::string id;
    std::string family;  // empty: unclassified
    std::string glottocode;
};

// Forms given as (variety, concept, space-separated segments).
using FormSpec = std::tuple<std::string, std::string, std::string>;

inline Corpus make_corpus(const std::vector<VarietySpec>& varieties, const std::vector<FormSpec>& forms) {
    Corpus corpus;
    for (const auto& v : varieties) {
        colexforge::Variety variety;
        variety.id = v.id;
        variety.name = v.id;
        variety.dataset_id = "fx";
        if (!v.family.empty()) variety.family = v.family;
        if (!v.glottocode.empty()) variety.glottocode = v.glottocode;
        corpus.varieties.emplace(v.id, variety);
    }
    std::size_t n = 0;
    for (const auto& [variety, concept_id, segments] : forms) {
        WordForm form;
        form.id = "fx/" + std::to_string(n++);
        form.variety_id = variety;
        form.concept_id = concept_id;
        form.segments = colexforge::split_segments(segments);
        form.value = segments;
        corpus.forms.push_back(form);
        corpus.concepts.try_emplace(concept_id, colexforge::Concept{concept_id, std::nullopt});
    }
    corpus.provenance = {"fx"};
    return corpus;
}

inline std::string concept_name(std::size_t i) {
    std::string s = "C";
    if (i < 10) s += '0';
    return s + std::to_string(i);
}

// Weighted edge between node indices; the weight becomes the family count.
struct WEdge {
    std::size_t a;
    std::size_t b;
    std::size_t w;
};

inline ColexNetwork make_network(std::size_t n, const std::vector<WEdge>& edges, std::size_t threshold = 1) {
    std::vector<ConceptNode> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back({concept_name(i), 1, 1, std::nullopt});
    std::vector<ColexEdge> out;
    for (const auto& e : edges) {
        ColexEdge edge;
        edge.concept_a = concept_name(e.a);
        edge.concept_b = concept_name(e.b);
        if (edge.concept_b < edge.concept_a) std::swap(edge.concept_a, edge.concept_b);
        for (std::size_t f = 0; f < e.w; ++f) {
            edge.families.insert("f" + std::to_string(f));
            edge.varieties.insert("v" + std::to_string(f));
        }
        edge.word_count = e.w;
        out.push_back(edge);
    }
    return ColexNetwork(std::move(nodes), std::move(out), threshold);
}

// Two triangles joined by one bridge: {0,1,2} and {3,4,5}, bridge 2-3.
inline ColexNetwork barbell() {
    return make_network(6, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}});
}

// Random simple graph on n nodes; each pair is an edge with probability p.
inline std::vector<WEdge> random_edges(std::mt19937_64& rng, std::size_t n, double p, std::size_t max_w) {
    std::bernoulli_distribution coin(p);
    std::uniform_int_distribution<std::size_t> weight(1, max_w);
    std::vector<WEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) edges.push_back({i, j, weight(rng)});
        }
    }
    return edges;
}

// Random corpus with a tiny segment alphabet so that forms collide often.
inline Corpus random_corpus(std::mt19937_64& rng, std::size_t varieties, std::size_t max_forms,
                            std::size_t concepts, std::size_t families) {
    static const std::vector<std::string> alphabet = {"a", "k", "t", "+", "_"};
    std::vector<VarietySpec> vs;
    std::vector<FormSpec> fs;
    std::uniform_int_distribution<std::size_t> fam(0, families - 1);
    std::uniform_int_distribution<std::size_t> nforms(1, max_forms);
    std::uniform_int_distribution<std::size_t> concept_pick(0, concepts - 1);
    std::uniform_int_distribution<std::size_t> len(1, 3);
    std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
    std::uniform_int_distribution<std::size_t> sound(0, 2);
    for (std::size_t v = 0; v < varieties; ++v) {
        const std::string vid = "v" + std::to_string(v);
        vs.push_back({vid, "fam" + std::to_string(fam(rng)), ""});
        const auto count = nforms(rng);
        for (std::size_t f = 0; f < count; ++f) {
            std::string segments;
            const auto l = len(rng);
            for (std::size_t s = 0; s < l; ++s) {
                if (!segments.empty()) segments += ' ';
                segments += alphabet[letter(rng)];
            }
            // guarantee at least one sound segment
            segments += " " + alphabet[sound(rng)];
            fs.emplace_back(vid, concept_name(concept_pick(rng)), segments);
        }
    }
    return make_corpus(vs, fs);
}

}  // namespace fixtures
