#include "colexforge/colexify.hpp"
#include "colexforge/error.hpp"
#include "colexforge/network.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace colexforge;

namespace {

// Each variety has its own family; concept pairs attested in `k` varieties.
Corpus attested_in(std::size_t k) {
    std::vector<fixtures::VarietySpec> vs;
    std::vector<fixtures::FormSpec> fs;
    for (std::size_t v = 0; v < k; ++v) {
        const auto id = "v" + std::to_string(v);
        vs.push_back({id, "F" + std::to_string(v), ""});
        fs.emplace_back(id, "ARM", "t a y");
        fs.emplace_back(id, "HAND", "t a y");
    }
    return fixtures::make_corpus(vs, fs);
}

std::set<std::pair<std::string, std::string>> edge_set(const ColexNetwork& n) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : n.edges()) out.emplace(e.concept_a, e.concept_b);
    return out;
}

}  // namespace

TEST_CASE("pair in two families is below the default threshold, three is enough") {
    const auto two = build_network(build_store(attested_in(2)));
    CHECK(two.edges().empty());
    CHECK(two.nodes().size() == 2);
    const auto three = build_network(build_store(attested_in(3)));
    REQUIRE(three.edges().size() == 1);
    CHECK(three.edges()[0].weight() == 3);
    CHECK(three.threshold() == 3);
}

TEST_CASE("families, not varieties, carry the weight") {
    auto c = fixtures::make_corpus({{"a", "F", ""}, {"b", "F", ""}, {"c", "F", ""}, {"d", "G", ""}},
                                   {{"a", "X", "k"}, {"a", "Y", "k"}, {"b", "X", "k"}, {"b", "Y", "k"},
                                    {"c", "X", "k"}, {"c", "Y", "k"}, {"d", "X", "k"}, {"d", "Y", "k"}});
    const auto store = build_store(c);
    CHECK(build_network(store, 3).edges().empty());
    const auto n = build_network(store, 2);
    REQUIRE(n.edges().size() == 1);
    CHECK(n.edges()[0].varieties.size() == 4);
    CHECK(n.edges()[0].weight() == 2);
}

TEST_CASE("threshold 1 keeps every indexed pair") {
    std::mt19937_64 rng(3);
    const auto c = fixtures::random_corpus(rng, 20, 30, 8, 4);
    const auto store = build_store(c);
    const auto n = build_network(store, 1);
    std::set<std::pair<std::string, std::string>> raw;
    for (const auto& [p, att] : store.index) raw.emplace(p.a, p.b);
    CHECK(edge_set(n) == raw);
    CHECK(n.nodes().size() == store.inventory.size());
}

TEST_CASE("edge sets shrink as the threshold rises") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = fixtures::random_corpus(rng, 30, 25, 8, 6);
        const auto store = build_store(c);
        auto previous = edge_set(build_network(store, 1));
        for (std::size_t t = 2; t <= 7; ++t) {
            const auto current = edge_set(build_network(store, t));
            CHECK(std::includes(previous.begin(), previous.end(), current.begin(), current.end()));
            // brute force: exactly the pairs with >= t families
            std::size_t expected = 0;
            for (const auto& [p, att] : store.index) expected += att.families.size() >= t ? 1 : 0;
            CHECK(current.size() == expected);
            previous = current;
        }
    }
}

TEST_CASE("degrees") {
    const auto n = fixtures::make_network(4, {{0, 1, 3}, {0, 2, 5}});
    CHECK(degree(n, "C00") == 2);
    CHECK(weighted_degree(n, "C00") == 8);
    CHECK(degree(n, "C03") == 0);
    CHECK(weighted_degree(n, "C03") == 0);
    CHECK(colexified_concepts(n) == 3);
    // over the three colexified nodes: degrees 2,1,1; weighted 8,3,5
    CHECK(average_degree(n) == doctest::Approx(4.0 / 3.0));
    CHECK(average_weighted_degree(n) == doctest::Approx(16.0 / 3.0));
    try {
        degree(n, "NOPE");
        FAIL("expected UnknownConcept");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownConcept);
    }
}

TEST_CASE("handshake: degrees sum to twice the edge count") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t nodes = 2 + trial % 12;
        const auto edges = fixtures::random_edges(rng, nodes, 0.4, 6);
        const auto n = fixtures::make_network(nodes, edges);
        std::size_t total = 0;
        std::size_t weighted = 0;
        std::size_t touched = 0;
        for (const auto& node : n.nodes()) {
            total += degree(n, node.id);
            weighted += weighted_degree(n, node.id);
            touched += degree(n, node.id) > 0 ? 1 : 0;
        }
        std::size_t w = 0;
        for (const auto& e : edges) w += e.w;
        CHECK(total == 2 * edges.size());
        CHECK(weighted == 2 * w);
        CHECK(colexified_concepts(n) == touched);
        if (touched > 0) CHECK(average_degree(n) == doctest::Approx(2.0 * edges.size() / touched));
    }
    CHECK(average_degree(fixtures::make_network(3, {})) == 0.0);
}

TEST_CASE("network constructor rejects broken graphs") {
    auto node = [](std::string id) { return ConceptNode{std::move(id), 1, 1, std::nullopt}; };
    auto edge = [](std::string a, std::string b, std::size_t w) {
        ColexEdge e{std::move(a), std::move(b), {}, {}, 1};
        for (std::size_t i = 0; i < w; ++i) {
            e.families.insert("f" + std::to_string(i));
            e.varieties.insert("v" + std::to_string(i));
        }
        return e;
    };
    CHECK_THROWS_AS(ColexNetwork({node("A"), node("A")}, {}, 1), Error);
    CHECK_THROWS_AS(ColexNetwork({node("A"), node("B")}, {edge("B", "A", 1)}, 1), Error);
    CHECK_THROWS_AS(ColexNetwork({node("A")}, {edge("A", "A", 1)}, 1), Error);
    CHECK_THROWS_AS(ColexNetwork({node("A"), node("B")}, {edge("A", "B", 1), edge("A", "B", 2)}, 1), Error);
    CHECK_THROWS_AS(ColexNetwork({node("A"), node("B")}, {edge("A", "B", 2)}, 3), Error);
    CHECK_THROWS_AS(ColexNetwork({node("A")}, {edge("A", "B", 1)}, 1), Error);
    CHECK_NOTHROW(ColexNetwork({node("B"), node("A")}, {edge("A", "B", 3)}, 3));
}
