#include "colexforge/colexify.hpp"
#include "colexforge/community.hpp"
#include "colexforge/network.hpp"
#include "colexforge/select.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <set>
#include <string>

using namespace colexforge;

namespace {

// Word lists over a small segment inventory so that keys collide.
Corpus synthetic_corpus(std::size_t varieties, std::size_t forms_per_variety, std::size_t concepts) {
    static const char* inventory[] = {"a", "e", "i", "k", "t", "m", "n", "s"};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> concept_pick(0, concepts - 1);
    std::uniform_int_distribution<std::size_t> len(2, 4);
    std::uniform_int_distribution<std::size_t> seg(0, 7);
    Corpus corpus;
    for (std::size_t v = 0; v < varieties; ++v) {
        Variety variety;
        variety.id = "v" + std::to_string(v);
        variety.name = variety.id;
        variety.family = "f" + std::to_string(v % 40);
        variety.dataset_id = "bench";
        corpus.varieties.emplace(variety.id, variety);
        for (std::size_t f = 0; f < forms_per_variety; ++f) {
            WordForm form;
            form.id = variety.id + "-" + std::to_string(f);
            form.variety_id = variety.id;
            form.concept_id = "C" + std::to_string(concept_pick(rng));
            const auto l = len(rng);
            for (std::size_t s = 0; s < l; ++s) form.segments.emplace_back(inventory[seg(rng)]);
            corpus.concepts.try_emplace(form.concept_id, Concept{form.concept_id, std::nullopt});
            corpus.forms.push_back(std::move(form));
        }
    }
    corpus.provenance = {"bench"};
    canonicalize(corpus);
    return corpus;
}

const Corpus& corpus_of(std::size_t varieties) {
    static std::map<std::size_t, Corpus> cache;
    auto it = cache.find(varieties);
    if (it == cache.end()) it = cache.emplace(varieties, synthetic_corpus(varieties, 200, 600)).first;
    return it->second;
}

// Quadratic pair scan inside each variety, the baseline the index replaces.
std::size_t brute_force_pairs(const Corpus& corpus) {
    std::map<std::string, std::vector<const WordForm*>> by_variety;
    for (const auto& f : corpus.forms) by_variety[f.variety_id].push_back(&f);
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& [id, forms] : by_variety) {
        for (std::size_t i = 0; i < forms.size(); ++i) {
            const auto ki = normalize_form(forms[i]->segments).canonical;
            for (std::size_t j = i + 1; j < forms.size(); ++j) {
                if (forms[i]->concept_id == forms[j]->concept_id) continue;
                if (ki != normalize_form(forms[j]->segments).canonical) continue;
                pairs.insert(std::minmax(forms[i]->concept_id, forms[j]->concept_id));
            }
        }
    }
    return pairs.size();
}

void BM_BuildStore(benchmark::State& state) {
    const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(build_store(corpus, threads));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.forms.size()));
}

void BM_BuildStoreSerial(benchmark::State& state) {
    const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_store_serial(corpus));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.forms.size()));
}

void BM_BruteForcePairs(benchmark::State& state) {
    const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_pairs(corpus));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.forms.size()));
}

void BM_ConceptCount(benchmark::State& state) {
    const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(count_concept_occurrence(corpus, threads));
}

void BM_ConceptCountSerial(benchmark::State& state) {
    const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_concept_occurrence_serial(corpus));
}

void BM_DetectCommunities(benchmark::State& state) {
    const auto& corpus = corpus_of(500);
    static const auto network = build_network(build_store(corpus), 2);
    DetectOptions options;
    options.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(detect_communities(network, 42, options));
    state.counters["edges"] = static_cast<double>(network.edges().size());
}

}  // namespace

BENCHMARK(BM_BuildStore)->ArgsProduct({{100, 500}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildStoreSerial)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForcePairs)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConceptCount)->ArgsProduct({{500}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConceptCountSerial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectCommunities)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
