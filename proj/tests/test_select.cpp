#include "colexforge/error.hpp"
#include "colexforge/select.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace colexforge;
using fixtures::FormSpec;
using fixtures::VarietySpec;

namespace {

std::set<std::string> kept_varieties(const Corpus& c, std::size_t threshold) {
    SelectionConfig cfg;
    cfg.concept_cap = SelectionConfig::unlimited;
    cfg.variety_min_concepts = threshold;
    try {
        std::set<std::string> out;
        for (const auto& [id, v] : apply_selection(c, cfg).corpus.varieties) out.insert(id);
        return out;
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::EmptySelection);
        return {};
    }
}

// Distinct-variety count per concept by brute force.
std::map<std::string, std::size_t> brute_counts(const Corpus& c) {
    std::map<std::string, std::set<std::string>> seen;
    for (const auto& f : c.forms) seen[f.concept_id].insert(f.variety_id);
    std::map<std::string, std::size_t> out;
    for (const auto& [k, v] : seen) out[k] = v.size();
    return out;
}

}  // namespace

TEST_CASE("config validation") {
    SelectionConfig cfg;
    CHECK(cfg.concept_cap == 1800);
    CHECK(cfg.variety_min_concepts == 180);
    CHECK_NOTHROW(cfg.validate());
    cfg.variety_min_concepts = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.variety_min_concepts = 10;
    cfg.concept_cap = 9;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("ranking by distinct varieties, ties by id") {
    std::vector<VarietySpec> vs;
    std::vector<FormSpec> fs;
    for (int v = 0; v < 6; ++v) {
        const auto id = "v" + std::to_string(v);
        vs.push_back({id, "F", ""});
        fs.emplace_back(id, "WATER", "w a " + std::to_string(v));
        // two forms for one concept in the same variety count once
        fs.emplace_back(id, "WATER", "u a " + std::to_string(v));
        if (v < 3) fs.emplace_back(id, "SALT", "s a");
        if (v < 4) {
            fs.emplace_back(id, "HAND", "t e");
            fs.emplace_back(id, "EYE", "m e");
        }
    }
    const auto c = fixtures::make_corpus(vs, fs);
    const auto r = rank_concepts(c, 10);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == RankedConcept{"WATER", 6});
    CHECK(r[1] == RankedConcept{"EYE", 4});
    CHECK(r[2] == RankedConcept{"HAND", 4});
    CHECK(r[3] == RankedConcept{"SALT", 3});
    CHECK(rank_concepts(c, 2).size() == 2);
}

TEST_CASE("cap 10 on 12 concepts cuts the two rarest") {
    std::vector<VarietySpec> vs;
    std::vector<FormSpec> fs;
    // concept k is attested in k+1 of 12 varieties
    for (int v = 0; v < 12; ++v) vs.push_back({"v" + std::to_string(v), "F" + std::to_string(v % 3), ""});
    for (std::size_t k = 0; k < 12; ++k) {
        for (std::size_t v = 0; v <= k; ++v) fs.emplace_back("v" + std::to_string(v), fixtures::concept_name(k), "a");
    }
    const auto c = fixtures::make_corpus(vs, fs);
    SelectionConfig cfg;
    cfg.concept_cap = 10;
    cfg.variety_min_concepts = 1;
    const auto s = apply_selection(c, cfg);
    // brute force: sort by count then id and take 10
    auto counts = brute_counts(c);
    std::vector<std::pair<std::string, std::size_t>> order(counts.begin(), counts.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::set<std::string> expected;
    for (std::size_t i = 0; i < 10; ++i) expected.insert(order[i].first);
    CHECK(s.report.kept_concepts == expected);
    CHECK_FALSE(s.report.kept_concepts.contains("C00"));
    CHECK_FALSE(s.report.kept_concepts.contains("C01"));
}

TEST_CASE("coverage threshold is inclusive: 180 survives, 179 fails") {
    std::vector<FormSpec> fs;
    for (std::size_t k = 0; k < 180; ++k) {
        const auto concept_id = "K" + std::to_string(k);
        fs.emplace_back("full", concept_id, "a " + std::to_string(k));
        if (k < 179) fs.emplace_back("short", concept_id, "b " + std::to_string(k));
    }
    const auto c = fixtures::make_corpus({{"full", "F", ""}, {"short", "G", ""}}, fs);
    const auto s = apply_selection(c, SelectionConfig{});
    CHECK(s.corpus.varieties.size() == 1);
    CHECK(s.corpus.varieties.contains("full"));
    REQUIRE(s.report.dropped_varieties.size() == 1);
    CHECK(s.report.dropped_varieties[0] == DroppedVariety{"short", 179});
    CHECK(s.report.effective_concepts.size() == 180);
    CHECK(s.corpus.forms.size() == 180);
}

TEST_CASE("dropping a variety removes concepts only it attested") {
    const auto c = fixtures::make_corpus(
        {{"rich", "F", ""}, {"poor", "G", ""}},
        {{"rich", "A", "a"}, {"rich", "B", "b"}, {"rich", "C", "c"}, {"poor", "A", "x"}, {"poor", "RARE", "y"}});
    SelectionConfig cfg;
    cfg.concept_cap = 10;
    cfg.variety_min_concepts = 3;
    const auto s = apply_selection(c, cfg);
    CHECK(s.report.kept_concepts.contains("RARE"));
    CHECK_FALSE(s.report.effective_concepts.contains("RARE"));
    CHECK_FALSE(s.corpus.concepts.contains("RARE"));
    CHECK(s.report.effective_concepts == std::set<std::string>{"A", "B", "C"});
}

TEST_CASE("nothing survives: EmptySelection") {
    const auto c = fixtures::make_corpus({{"v", "F", ""}}, {{"v", "A", "a"}});
    SelectionConfig cfg;
    cfg.concept_cap = 5;
    cfg.variety_min_concepts = 2;
    try {
        apply_selection(c, cfg);
        FAIL("expected EmptySelection");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptySelection);
    }
}

TEST_CASE("raising the threshold never adds varieties") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = fixtures::random_corpus(rng, 12, 30, 20, 4);
        std::set<std::string> previous = kept_varieties(c, 1);
        for (std::size_t t = 2; t <= 21; ++t) {
            const auto current = kept_varieties(c, t);
            CHECK(std::includes(previous.begin(), previous.end(), current.begin(), current.end()));
            previous = current;
        }
    }
}

TEST_CASE("identity: caps above the inventory keep everything") {
    std::mt19937_64 rng(5);
    auto c = fixtures::random_corpus(rng, 8, 20, 10, 3);
    canonicalize(c);
    SelectionConfig cfg;
    cfg.concept_cap = SelectionConfig::unlimited;
    cfg.variety_min_concepts = 1;
    const auto s = apply_selection(c, cfg);
    CHECK(s.corpus.forms == c.forms);
    CHECK(s.corpus.varieties == c.varieties);
    CHECK(s.report.dropped_varieties.empty());
}

TEST_CASE("parallel concept count equals the serial reference and brute force") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = fixtures::random_corpus(rng, 30, 40, 25, 5);
        const auto serial = count_concept_occurrence_serial(c);
        for (int threads : {1, 2, 4}) CHECK(count_concept_occurrence(c, threads) == serial);
        const auto brute = brute_counts(c);
        for (const auto& rc : serial) {
            auto it = brute.find(rc.concept_id);
            CHECK(rc.variety_count == (it == brute.end() ? 0 : it->second));
        }
    }
}

TEST_CASE("selection is deterministic across runs and threads") {
    std::mt19937_64 rng(11);
    const auto c = fixtures::random_corpus(rng, 20, 30, 15, 4);
    SelectionConfig cfg;
    cfg.concept_cap = 10;
    cfg.variety_min_concepts = 4;
    const auto a = apply_selection(c, cfg, 1);
    const auto b = apply_selection(c, cfg, 4);
    CHECK(a.corpus == b.corpus);
    CHECK(a.report == b.report);
    CHECK(to_json(a.report) == to_json(b.report));
}
