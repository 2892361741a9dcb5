#include "colexforge/corpus.hpp"

#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace colexforge {
namespace {

constexpr int kBundleVersion = 1;

std::string or_empty(const std::optional<std::string>& value) { return value.value_or(std::string{}); }

std::optional<std::string> non_empty(std::string value) {
    if (value.empty()) return std::nullopt;
    return value;
}

bool same_triple(const WordForm& a, const WordForm& b) {
    return a.variety_id == b.variety_id && a.concept_id == b.concept_id && a.segments == b.segments;
}

}  // namespace

const std::string& family_key(const Variety& variety) {
    return variety.family ? *variety.family : variety.id;
}

std::vector<std::string> split_segments(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::string join_segments(const std::vector<std::string>& segments) {
    std::string out;
    for (const auto& token : segments) {
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

std::size_t canonicalize(Corpus& corpus) {
    auto& forms = corpus.forms;
    std::sort(forms.begin(), forms.end(), [](const WordForm& a, const WordForm& b) {
        return std::forward_as_tuple(a.variety_id, a.concept_id, a.segments, a.derived_from.has_value(),
                                     a.derived_from, a.id, a.value) <
               std::forward_as_tuple(b.variety_id, b.concept_id, b.segments, b.derived_from.has_value(),
                                     b.derived_from, b.id, b.value);
    });
    auto last = std::unique(forms.begin(), forms.end(), same_triple);
    const auto removed = static_cast<std::size_t>(std::distance(last, forms.end()));
    forms.erase(last, forms.end());

    std::sort(corpus.provenance.begin(), corpus.provenance.end());
    corpus.provenance.erase(std::unique(corpus.provenance.begin(), corpus.provenance.end()),
                            corpus.provenance.end());
    return removed;
}

void write_corpus_bundle(const Corpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());

    nlohmann::ordered_json meta;
    meta["format"] = "colexforge-corpus";
    meta["version"] = kBundleVersion;
    meta["provenance"] = corpus.provenance;
    meta["tables"] = {{"varieties", "varieties.csv"}, {"concepts", "concepts.csv"}, {"forms", "forms.csv"}};
    {
        std::ofstream out(dir / "corpus.json", std::ios::binary);
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + (dir / "corpus.json").string());
        out << meta.dump(2) << '\n';
    }

    csv::Table varieties{{"id", "name", "glottocode", "family", "dataset_id"}, {}};
    for (const auto& [id, v] : corpus.varieties) {
        varieties.rows.push_back({v.id, v.name, or_empty(v.glottocode), or_empty(v.family), v.dataset_id});
    }
    csv::write_file(dir / "varieties.csv", varieties);

    csv::Table concepts{{"id", "concepticon_id"}, {}};
    for (const auto& [id, c] : corpus.concepts) concepts.rows.push_back({c.id, or_empty(c.concepticon_id)});
    csv::write_file(dir / "concepts.csv", concepts);

    csv::Table forms{{"id", "variety_id", "concept_id", "segments", "value", "derived_from"}, {}};
    for (const auto& f : corpus.forms) {
        forms.rows.push_back(
            {f.id, f.variety_id, f.concept_id, join_segments(f.segments), f.value, or_empty(f.derived_from)});
    }
    csv::write_file(dir / "forms.csv", forms);
}

Corpus read_corpus_bundle(const std::filesystem::path& dir) {
    const auto meta_path = dir / "corpus.json";
    std::ifstream in(meta_path);
    if (!in) throw Error(ErrorKind::MissingFile, meta_path.string());

    Corpus corpus;
    try {
        const auto meta = nlohmann::json::parse(in);
        if (meta.at("format") != "colexforge-corpus" || meta.at("version") != kBundleVersion) {
            throw Error(ErrorKind::MalformedMetadata, meta_path.string() + ": not a corpus bundle");
        }
        corpus.provenance = meta.at("provenance").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedMetadata, meta_path.string() + ": " + e.what());
    }

    const auto varieties = csv::read_file(dir / "varieties.csv");
    const auto vid = varieties.require_column("id", "varieties.csv");
    const auto vname = varieties.require_column("name", "varieties.csv");
    const auto vglotto = varieties.require_column("glottocode", "varieties.csv");
    const auto vfamily = varieties.require_column("family", "varieties.csv");
    const auto vds = varieties.require_column("dataset_id", "varieties.csv");
    for (const auto& row : varieties.rows) {
        Variety v{row[vid], non_empty(row[vglotto]), non_empty(row[vfamily]), row[vname], row[vds]};
        if (!corpus.varieties.emplace(v.id, v).second) {
            throw Error(ErrorKind::DuplicateId, "variety " + v.id + " in " + dir.string());
        }
    }

    const auto concepts = csv::read_file(dir / "concepts.csv");
    const auto cid = concepts.require_column("id", "concepts.csv");
    const auto cct = concepts.require_column("concepticon_id", "concepts.csv");
    for (const auto& row : concepts.rows) {
        Concept c{row[cid], non_empty(row[cct])};
        if (!corpus.concepts.emplace(c.id, c).second) {
            throw Error(ErrorKind::DuplicateId, "concept " + c.id + " in " + dir.string());
        }
    }

    const auto forms = csv::read_file(dir / "forms.csv");
    const auto fid = forms.require_column("id", "forms.csv");
    const auto fvar = forms.require_column("variety_id", "forms.csv");
    const auto fcon = forms.require_column("concept_id", "forms.csv");
    const auto fseg = forms.require_column("segments", "forms.csv");
    const auto fval = forms.require_column("value", "forms.csv");
    const auto fder = forms.require_column("derived_from", "forms.csv");
    corpus.forms.reserve(forms.rows.size());
    for (std::size_t r = 0; r < forms.rows.size(); ++r) {
        const auto& row = forms.rows[r];
        if (!corpus.varieties.contains(row[fvar])) {
            throw Error(ErrorKind::DanglingReference,
                        "forms.csv row " + std::to_string(r + 1) + ", column variety_id: " + row[fvar]);
        }
        if (!corpus.concepts.contains(row[fcon])) {
            throw Error(ErrorKind::DanglingReference,
                        "forms.csv row " + std::to_string(r + 1) + ", column concept_id: " + row[fcon]);
        }
        corpus.forms.push_back(
            {row[fid], row[fvar], row[fcon], split_segments(row[fseg]), row[fval], non_empty(row[fder])});
    }
    return corpus;
}

}  // namespace colexforge
