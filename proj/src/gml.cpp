#include "colexforge/gml.hpp"

#include "colexforge/error.hpp"

#include <cctype>
#include <cstdint>
#include <optional>
#include <set>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <variant>

namespace colexforge {
namespace {

// GML strings are ASCII: '&' and '"' become entities and every non-ASCII
// code point is written as &#N;.
std::string gml_escape(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size();) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            if (c == '&') out += "&amp;";
            else if (c == '"') out += "&quot;";
            else out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        const int extra = c >= 0xF0 ? 3 : c >= 0xE0 ? 2 : c >= 0xC0 ? 1 : -1;
        if (extra < 0 || i + static_cast<std::size_t>(extra) >= text.size()) {
            throw Error(ErrorKind::IoError, "invalid UTF-8 in GML string");
        }
        std::uint32_t cp = c & (0x3F >> extra);
        for (int k = 1; k <= extra; ++k) cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
        out += "&#" + std::to_string(cp) + ";";
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string gml_unescape(std::string_view text) {
    static const std::map<std::string_view, char> named{{"amp", '&'}, {"quot", '"'}, {"lt", '<'}, {"gt", '>'}, {"apos", '\''}};
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '&') {
            out.push_back(text[i]);
            continue;
        }
        const auto end = text.find(';', i);
        if (end == std::string_view::npos) throw Error(ErrorKind::MalformedGml, "unterminated entity");
        const auto entity = text.substr(i + 1, end - i - 1);
        if (entity.starts_with('#')) {
            const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
            const std::string digits(entity.substr(hex ? 2 : 1));
            try {
                append_utf8(out, static_cast<std::uint32_t>(std::stoul(digits, nullptr, hex ? 16 : 10)));
            } catch (const std::exception&) {
                throw Error(ErrorKind::MalformedGml, "bad entity &" + std::string(entity) + ";");
            }
        } else if (auto it = named.find(entity); it != named.end()) {
            out.push_back(it->second);
        } else {
            throw Error(ErrorKind::MalformedGml, "unknown entity &" + std::string(entity) + ";");
        }
        i = end;
    }
    return out;
}

std::string join(const std::set<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out.push_back(';');
        out += item;
    }
    return out;
}

std::set<std::string> split(const std::string& text) {
    std::set<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        if (end > start) out.insert(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

struct Value;
using List = std::vector<std::pair<std::string, Value>>;
struct Value {
    std::variant<long long, double, std::string, std::shared_ptr<List>> data;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    List parse_document() {
        List top = parse_list(false);
        return top;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::MalformedGml, "line " + std::to_string(line_) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    List parse_list(bool nested) {
        List list;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) {
                if (nested) fail("missing ']'");
                return list;
            }
            if (text_[pos_] == ']') {
                if (!nested) fail("unexpected ']'");
                ++pos_;
                return list;
            }
            std::string key = parse_key();
            skip_space();
            list.emplace_back(std::move(key), parse_value());
        }
    }

    std::string parse_key() {
        const auto start = pos_;
        if (!std::isalpha(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '_') fail("expected a key");
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Value parse_value() {
        if (pos_ >= text_.size()) fail("missing value");
        const char c = text_[pos_];
        if (c == '[') {
            ++pos_;
            return Value{std::make_shared<List>(parse_list(true))};
        }
        if (c == '"') {
            const auto end = text_.find('"', pos_ + 1);
            if (end == std::string_view::npos) fail("unterminated string");
            const auto raw = text_.substr(pos_ + 1, end - pos_ - 1);
            for (char ch : raw) line_ += ch == '\n' ? 1 : 0;
            pos_ = end + 1;
            return Value{gml_unescape(raw)};
        }
        const auto start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != ']') {
            ++pos_;
        }
        const std::string token(text_.substr(start, pos_ - start));
        try {
            std::size_t used = 0;
            if (token.find_first_of(".eE") == std::string::npos) {
                const long long v = std::stoll(token, &used);
                if (used == token.size()) return Value{v};
            } else {
                const double v = std::stod(token, &used);
                if (used == token.size()) return Value{v};
            }
        } catch (const std::exception&) {
        }
        fail("bad value '" + token + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

const Value* find(const List& list, std::string_view key) {
    for (const auto& [k, v] : list) {
        if (k == key) return &v;
    }
    return nullptr;
}

long long int_attr(const List& list, std::string_view key, std::string_view where) {
    const Value* v = find(list, key);
    if (!v) throw Error(ErrorKind::MalformedGml, std::string(where) + " lacks '" + std::string(key) + "'");
    if (auto i = std::get_if<long long>(&v->data)) return *i;
    if (auto d = std::get_if<double>(&v->data)) return static_cast<long long>(*d);
    throw Error(ErrorKind::MalformedGml, std::string(where) + ": '" + std::string(key) + "' is not a number");
}

std::optional<long long> opt_int(const List& list, std::string_view key, std::string_view where) {
    if (!find(list, key)) return std::nullopt;
    return int_attr(list, key, where);
}

std::optional<std::string> opt_string(const List& list, std::string_view key) {
    const Value* v = find(list, key);
    if (!v) return std::nullopt;
    if (auto s = std::get_if<std::string>(&v->data)) return *s;
    if (auto i = std::get_if<long long>(&v->data)) return std::to_string(*i);
    return std::nullopt;
}

std::set<std::string> placeholder_set(std::string_view prefix, long long count) {
    std::set<std::string> out;
    for (long long i = 0; i < count; ++i) out.insert(std::string(prefix) + std::to_string(i));
    return out;
}

}  // namespace

std::string gml_text(const ColexNetwork& network) {
    std::ostringstream out;
    out << "graph [\n  directed 0\n  min_families " << network.threshold() << '\n';
    const auto& nodes = network.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& node = nodes[i];
        out << "  node [\n    id " << i << "\n    label \"" << gml_escape(node.id) << "\"\n"
            << "    variety_coverage " << node.variety_coverage << "\n    family_coverage " << node.family_coverage
            << '\n';
        if (node.community) out << "    community " << *node.community << '\n';
        out << "  ]\n";
    }
    for (const auto& edge : network.edges()) {
        out << "  edge [\n    source " << network.node_index(edge.concept_a) << "\n    target "
            << network.node_index(edge.concept_b) << "\n    weight " << edge.weight() << "\n    families "
            << edge.families.size() << "\n    varieties " << edge.varieties.size() << "\n    words "
            << edge.word_count << "\n    family_ids \"" << gml_escape(join(edge.families)) << "\"\n"
            << "    variety_ids \"" << gml_escape(join(edge.varieties)) << "\"\n  ]\n";
    }
    out << "]\n";
    return out.str();
}

void write_gml(const ColexNetwork& network, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
    out << gml_text(network);
    if (!out) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

ColexNetwork parse_gml(std::string_view text) {
    const List document = Parser(text).parse_document();
    const Value* graph_value = find(document, "graph");
    if (!graph_value || !std::holds_alternative<std::shared_ptr<List>>(graph_value->data)) {
        throw Error(ErrorKind::MalformedGml, "no graph block");
    }
    const List& graph = *std::get<std::shared_ptr<List>>(graph_value->data);
    if (auto directed = opt_int(graph, "directed", "graph"); directed && *directed != 0) {
        throw Error(ErrorKind::MalformedGml, "directed graphs are not supported");
    }
    const auto threshold = static_cast<std::size_t>(opt_int(graph, "min_families", "graph").value_or(1));

    std::vector<ConceptNode> nodes;
    std::vector<ColexEdge> edges;
    std::map<long long, std::string> labels;
    for (const auto& [key, value] : graph) {
        if (key != "node") continue;
        const auto* block = std::get_if<std::shared_ptr<List>>(&value.data);
        if (!block) throw Error(ErrorKind::MalformedGml, "node is not a block");
        const List& n = **block;
        const auto id = int_attr(n, "id", "node");
        ConceptNode node;
        node.id = opt_string(n, "label").value_or(std::to_string(id));
        node.variety_coverage = static_cast<std::size_t>(opt_int(n, "variety_coverage", "node").value_or(0));
        node.family_coverage = static_cast<std::size_t>(opt_int(n, "family_coverage", "node").value_or(0));
        if (auto community = opt_int(n, "community", "node")) node.community = static_cast<int>(*community);
        if (!labels.emplace(id, node.id).second) {
            throw Error(ErrorKind::MalformedGml, "duplicate node id " + std::to_string(id));
        }
        nodes.push_back(std::move(node));
    }
    for (const auto& [key, value] : graph) {
        if (key != "edge") continue;
        const auto* block = std::get_if<std::shared_ptr<List>>(&value.data);
        if (!block) throw Error(ErrorKind::MalformedGml, "edge is not a block");
        const List& e = **block;
        auto endpoint = [&](std::string_view which) {
            auto it = labels.find(int_attr(e, which, "edge"));
            if (it == labels.end()) throw Error(ErrorKind::MalformedGml, "edge references an unknown node");
            return it->second;
        };
        const auto a = endpoint("source");
        const auto b = endpoint("target");
        ColexEdge edge;
        edge.concept_a = std::min(a, b);
        edge.concept_b = std::max(a, b);
        if (auto ids = opt_string(e, "family_ids")) {
            edge.families = split(*ids);
        } else {
            edge.families = placeholder_set("family-", opt_int(e, "families", "edge").value_or(int_attr(e, "weight", "edge")));
        }
        if (auto ids = opt_string(e, "variety_ids")) {
            edge.varieties = split(*ids);
        } else {
            edge.varieties = placeholder_set("variety-", opt_int(e, "varieties", "edge").value_or(1));
        }
        edge.word_count = static_cast<std::size_t>(
            opt_int(e, "words", "edge").value_or(static_cast<long long>(edge.varieties.size())));
        edges.push_back(std::move(edge));
    }
    return ColexNetwork(std::move(nodes), std::move(edges), threshold);
}

ColexNetwork read_gml(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingFile, path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_gml(buffer.str());
}

}  // namespace colexforge
