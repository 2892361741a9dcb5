#include "colexforge/colexify.hpp"
#include "colexforge/community.hpp"
#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"
#include "colexforge/export.hpp"
#include "colexforge/gml.hpp"
#include "colexforge/network.hpp"
#include "colexforge/stats.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace colexforge;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

// v1 and v2 share family F and glottocode g1; v3 is family G; v4 is unclassified.
Corpus hand_corpus() {
    return fixtures::make_corpus({{"v1", "F", "g1"}, {"v2", "F", "g1"}, {"v3", "G", "g3"}, {"v4", "", ""}},
                                 {{"v1", "ARM", "t a y"},
                                  {"v1", "HAND", "t a y"},
                                  {"v1", "EYE", "m a t"},
                                  {"v2", "ARM", "r u k a"},
                                  {"v2", "HAND", "r u k a"},
                                  {"v3", "ARM", "k a"},
                                  {"v3", "HAND", "k a"},
                                  {"v3", "EYE", "k a"},
                                  {"v4", "ARM", "t e"},
                                  {"v4", "EYE", "t e"}});
}

ColexNetwork random_network(std::mt19937_64& rng, std::size_t nodes, double p) {
    return fixtures::make_network(nodes, fixtures::random_edges(rng, nodes, p, 6));
}

}  // namespace

TEST_CASE("GML for a two-node network") {
    const auto n = fixtures::make_network(2, {{0, 1, 3}});
    const auto text = gml_text(n);
    CHECK(count_of(text, "node [") == 2);
    CHECK(count_of(text, "edge [") == 1);
    CHECK(text.find("weight 3") != std::string::npos);
    CHECK(text.find("directed 0") != std::string::npos);
    CHECK(text.find("label \"C00\"") != std::string::npos);
    CHECK(parse_gml(text) == n);
}

TEST_CASE("GML for an empty network still parses") {
    const ColexNetwork empty;
    const auto text = gml_text(empty);
    CHECK(count_of(text, "node [") == 0);
    CHECK(count_of(text, "edge [") == 0);
    CHECK(parse_gml(text).nodes().empty());
    CHECK(parse_gml(text).edges().empty());
}

TEST_CASE("GML round trip keeps attributes, communities and awkward labels") {
    std::vector<ConceptNode> nodes = {{"SISTER \"OLDER\"", 3, 2, 0}, {"A & B", 1, 1, 0}, {"ÄITI", 2, 1, std::nullopt}};
    ColexEdge e{"A & B", "SISTER \"OLDER\"", {"x/v1", "y/v2"}, {"Fam One", "v2"}, 5};
    const ColexNetwork n(nodes, {e}, 2);
    const auto back = parse_gml(gml_text(n));
    CHECK(back == n);
    CHECK(back.threshold() == 2);
    CHECK(gml_text(back) == gml_text(n));
    fixtures::TempDir tmp;
    write_gml(n, tmp / "n.gml");
    CHECK(read_gml(tmp / "n.gml") == n);
}

TEST_CASE("GML round trip on random networks") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        auto n = random_network(rng, 1 + trial % 15, 0.3);
        if (trial % 2) apply_partition(n, detect_communities(n, 1).partition);
        CHECK(parse_gml(gml_text(n)) == n);
    }
}

TEST_CASE("GML without id lists still yields a consistent network") {
    const std::string text = R"(graph [
  directed 0
  node [ id 0 label "A" ]
  node [ id 1 label "B" ]
  edge [ source 0 target 1 weight 3 families 3 varieties 4 words 4 ]
])";
    const auto n = parse_gml(text);
    REQUIRE(n.edges().size() == 1);
    CHECK(n.edges()[0].weight() == 3);
    CHECK(n.edges()[0].varieties.size() == 4);
    CHECK(n.edges()[0].word_count == 4);
}

TEST_CASE("malformed GML") {
    CHECK_THROWS_AS(parse_gml("nothing here"), Error);
    CHECK_THROWS_AS(parse_gml("graph [ directed 1 ]"), Error);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 label \"A\" ] node [ id 0 label \"B\" ] ]"), Error);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 label \"A\" ] edge [ source 0 target 7 weight 1 ] ]"), Error);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 label \"A &bogus; \" ] ]"), Error);
    CHECK_THROWS_AS(parse_gml("graph [ node [ id 0 label \"A\" "), Error);
    CHECK_THROWS_AS(read_gml("/nonexistent/x.gml"), Error);
}

TEST_CASE("node and edge tables") {
    std::mt19937_64 rng(5);
    auto n = random_network(rng, 12, 0.4);
    const auto nodes = csv::parse(nodes_csv_text(n));
    const auto edges = csv::parse(edges_csv_text(n));
    CHECK(nodes.header == csv::Row{"concept_id", "variety_coverage", "family_coverage", "community"});
    CHECK(edges.header == csv::Row{"concept_a", "concept_b", "family_weight", "variety_count", "word_count"});
    CHECK(nodes.rows.size() == n.nodes().size());
    CHECK(edges.rows.size() == n.edges().size());
    CHECK(std::is_sorted(edges.rows.begin(), edges.rows.end(),
                         [](const auto& a, const auto& b) { return std::tie(a[0], a[1]) < std::tie(b[0], b[1]); }));
    for (const auto& row : nodes.rows) CHECK(row[3].empty());
    apply_partition(n, detect_communities(n, 1).partition);
    for (const auto& row : csv::parse(nodes_csv_text(n)).rows) CHECK_FALSE(row[3].empty());
    fixtures::TempDir tmp;
    write_tables(n, tmp / "nodes.csv", tmp / "edges.csv");
    CHECK(fixtures::read_text(tmp / "nodes.csv") == nodes_csv_text(n));
    CHECK(fixtures::read_text(tmp / "edges.csv") == edges_csv_text(n));
}

TEST_CASE("structural values on the hand fixture") {
    const auto c = hand_corpus();
    const auto store = build_store(c);
    const auto n = build_network(store, 2);
    const auto ds = build_structural(c, store, n);
    REQUIRE(ds.parameters.size() == 2);
    CHECK(ds.parameters[0].id == "ARM--EYE");
    CHECK(ds.parameters[1].id == "ARM--HAND");
    CHECK(ds.values.size() == 8);
    // attested pair
    CHECK(ds.at("v1", "ARM--HAND") == StructuralValue::Present);
    CHECK(ds.at("v2", "ARM--HAND") == StructuralValue::Present);
    CHECK(ds.at("v3", "ARM--HAND") == StructuralValue::Present);
    // v4 has no HAND form
    CHECK(ds.at("v4", "ARM--HAND") == StructuralValue::Missing);
    // v1 has both concepts under different keys
    CHECK(ds.at("v1", "ARM--EYE") == StructuralValue::Absent);
    CHECK(ds.at("v2", "ARM--EYE") == StructuralValue::Missing);
    CHECK(ds.at("v3", "ARM--EYE") == StructuralValue::Present);
    CHECK(ds.at("v4", "ARM--EYE") == StructuralValue::Present);
    CHECK_THROWS_AS(ds.at("v9", "ARM--EYE"), Error);

    fixtures::TempDir tmp;
    write_structural(ds, tmp / "structural");
    const auto values = csv::read_file(tmp / "structural" / "values.csv");
    CHECK(values.header == csv::Row{"id", "variety_id", "parameter_id", "value"});
    CHECK(values.rows.size() == 8);
    CHECK(values.rows[0] == csv::Row{"v1:ARM--EYE", "v1", "ARM--EYE", "absent"});
    CHECK(std::filesystem::exists(tmp / "structural" / "parameters.csv"));
    CHECK(std::filesystem::exists(tmp / "structural" / "structural-metadata.json"));
}

TEST_CASE("structural export rejects a network that does not match the store") {
    const auto c = hand_corpus();
    const auto store = build_store(c);
    const auto foreign = fixtures::make_network(2, {{0, 1, 2}});
    CHECK_THROWS_AS(build_structural(c, store, foreign), Error);
}

TEST_CASE("stats on the hand fixture") {
    const auto c = hand_corpus();
    const auto n = build_network(build_store(c), 2);
    Partition p;
    p.assignment = {{"ARM", 0}, {"EYE", 0}, {"HAND", 0}};
    p.num_communities = 1;
    const auto s = compute_stats(c, n, p);
    CHECK(s.datasets == 1);
    CHECK(s.varieties == 4);
    CHECK(s.languages == 2);
    CHECK(s.families == 3);
    CHECK(s.words == 10);
    CHECK(s.transcriptions == 10);
    CHECK(s.words_per_variety == 2.5);
    CHECK(s.concepts == 3);
    CHECK(s.colexified_concepts == 3);
    CHECK(s.languages_per_concept == doctest::Approx(2.0));
    CHECK(s.families_per_concept == doctest::Approx(8.0 / 3.0));
    CHECK(s.colexifications == 2);
    CHECK(s.avg_degree == doctest::Approx(4.0 / 3.0));
    CHECK(s.avg_weighted_degree == doctest::Approx(8.0 / 3.0));
    CHECK(s.communities == 1);
    CHECK(s.concepts_per_community == 3.0);

    const auto table = table_text(s);
    CHECK(table.find("Concepts per Community    3.0") != std::string::npos);
    CHECK(to_json(s).find("\"colexifications\": 2") != std::string::npos);

    const auto no_partition = compute_stats(c, n, std::nullopt);
    CHECK(no_partition.communities == 0);
}

TEST_CASE("single-variety corpus: words per variety equals words") {
    const auto c = fixtures::make_corpus({{"v", "F", "g"}}, {{"v", "A", "a"}, {"v", "B", "a"}, {"v", "C", "c"}});
    const auto s = compute_stats(c, build_network(build_store(c), 1), std::nullopt);
    CHECK(s.words_per_variety == static_cast<double>(s.words));
    CHECK(s.transcriptions == s.words);
}

TEST_CASE("diff on the hand-built pair") {
    // A: AB 3, AC 3, BC 4, CD 5, DE 3.  B: AB 4, AC 5, BC 4, EF 3.
    auto net = [](std::vector<std::tuple<std::string, std::string, std::size_t>> es) {
        std::set<std::string> ids;
        std::vector<ColexEdge> edges;
        for (const auto& [a, b, w] : es) {
            ids.insert(a);
            ids.insert(b);
            ColexEdge e{a, b, {}, {}, w};
            for (std::size_t i = 0; i < w; ++i) {
                e.families.insert("f" + std::to_string(i));
                e.varieties.insert("v" + std::to_string(i));
            }
            edges.push_back(e);
        }
        std::vector<ConceptNode> nodes;
        for (const auto& id : ids) nodes.push_back({id, 1, 1, std::nullopt});
        return ColexNetwork(nodes, edges, 3);
    };
    const auto a = net({{"A", "B", 3}, {"A", "C", 3}, {"B", "C", 4}, {"C", "D", 5}, {"D", "E", 3}});
    const auto b = net({{"A", "B", 4}, {"A", "C", 5}, {"B", "C", 4}, {"E", "F", 3}});
    const auto d = diff_networks(a, b);
    CHECK(d == DiffReport{3, 2, 1, 0, 2});
    CHECK(diff_networks(b, a) == DiffReport{3, 1, 2, 2, 0});
    CHECK(diff_networks(a, a) == DiffReport{5, 0, 0, 0, 0});
    const auto disjoint = net({{"X", "Y", 3}});
    CHECK(diff_networks(a, disjoint).shared_edges == 0);
    CHECK(to_json(d).find("\"b_dominant_shared\": 2") != std::string::npos);
}

TEST_CASE("diff identities on random pairs") {
    std::mt19937_64 rng(100);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_network(rng, 10, 0.3);
        const auto b = random_network(rng, 10, 0.3);
        const auto d = diff_networks(a, b);
        CHECK(d.shared_edges + d.unique_to_a == a.edges().size());
        CHECK(d.shared_edges + d.unique_to_b == b.edges().size());
        CHECK(d.a_dominant_shared + d.b_dominant_shared <= d.shared_edges);
    }
}
