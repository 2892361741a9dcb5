#include "colexforge/community.hpp"

#include "colexforge/csv.hpp"
#include "colexforge/error.hpp"
#include "colexforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>

namespace colexforge {
namespace {

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Flow model of the non-isolated part of a network. Edge and node flows are
// normalized by twice the total edge weight.
struct FlowGraph {
    std::vector<std::string> ids;
    std::vector<double> node_flow;
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;  // neighbor, edge flow
    double node_term = 0.0;                                               // sum plogp(p_alpha)
};

FlowGraph make_flow_graph(const ColexNetwork& network) {
    FlowGraph g;
    double total = 0.0;
    for (const auto& e : network.edges()) total += static_cast<double>(e.weight());
    if (total <= 0.0) return g;

    std::vector<std::size_t> local(network.nodes().size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < network.nodes().size(); ++i) {
        if (network.incident_edges(i).empty()) continue;
        local[i] = g.ids.size();
        g.ids.push_back(network.nodes()[i].id);
    }
    g.node_flow.assign(g.ids.size(), 0.0);
    g.adjacency.resize(g.ids.size());
    for (const auto& e : network.edges()) {
        const auto a = local[network.node_index(e.concept_a)];
        const auto b = local[network.node_index(e.concept_b)];
        const double flow = static_cast<double>(e.weight()) / (2.0 * total);
        g.adjacency[a].emplace_back(b, flow);
        g.adjacency[b].emplace_back(a, flow);
        g.node_flow[a] += flow;
        g.node_flow[b] += flow;
    }
    for (double p : g.node_flow) g.node_term += plogp(p);
    return g;
}

CodelengthBreakdown codelength_of(const FlowGraph& g, const std::vector<std::size_t>& module_of) {
    const std::size_t modules = module_of.empty() ? 0 : *std::max_element(module_of.begin(), module_of.end()) + 1;
    std::vector<double> exit(modules, 0.0), flow(modules, 0.0);
    for (std::size_t v = 0; v < g.ids.size(); ++v) {
        flow[module_of[v]] += g.node_flow[v];
        for (const auto& [u, w] : g.adjacency[v]) {
            if (module_of[u] != module_of[v]) exit[module_of[v]] += w;
        }
    }
    double sum_exit = 0.0, sum_plogp_exit = 0.0, sum_plogp_total = 0.0;
    for (std::size_t m = 0; m < modules; ++m) {
        sum_exit += exit[m];
        sum_plogp_exit += plogp(exit[m]);
        sum_plogp_total += plogp(exit[m] + flow[m]);
    }
    CodelengthBreakdown out;
    out.index_bits = plogp(sum_exit) - sum_plogp_exit;
    out.module_bits = -sum_plogp_exit - g.node_term + sum_plogp_total;
    out.total_bits = out.index_bits + out.module_bits;
    return out;
}

// One level of the optimizer: supernodes made of original nodes, with the
// flow between distinct supernodes.
struct Level {
    std::vector<double> flow;
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
    std::vector<std::vector<std::size_t>> members;
};

Level base_level(const FlowGraph& g) {
    Level level{g.node_flow, g.adjacency, {}};
    level.members.resize(g.ids.size());
    for (std::size_t v = 0; v < g.ids.size(); ++v) level.members[v] = {v};
    return level;
}

// Merges supernodes sharing a module into one supernode per non-empty module.
Level aggregate(const Level& level, const std::vector<std::size_t>& module_of) {
    std::vector<std::size_t> dense(level.flow.size(), std::numeric_limits<std::size_t>::max());
    std::size_t count = 0;
    for (std::size_t v = 0; v < level.flow.size(); ++v) {
        auto& d = dense[module_of[v]];
        if (d == std::numeric_limits<std::size_t>::max()) d = count++;
    }
    Level next;
    next.flow.assign(count, 0.0);
    next.members.resize(count);
    std::vector<std::map<std::size_t, double>> links(count);
    for (std::size_t v = 0; v < level.flow.size(); ++v) {
        const auto m = dense[module_of[v]];
        next.flow[m] += level.flow[v];
        next.members[m].insert(next.members[m].end(), level.members[v].begin(), level.members[v].end());
        for (const auto& [u, w] : level.adjacency[v]) {
            const auto mu = dense[module_of[u]];
            if (mu != m) links[m][mu] += w;
        }
    }
    next.adjacency.resize(count);
    for (std::size_t m = 0; m < count; ++m) next.adjacency[m].assign(links[m].begin(), links[m].end());
    return next;
}

// Greedy moves of the supernodes of one level between modules. Module ids
// live in [0, n); a move may open any empty module.
class LocalMover {
public:
    LocalMover(const Level& level, double node_term, double min_improvement, std::vector<std::size_t> module_of)
        : level_(&level), node_term_(node_term), min_improvement_(min_improvement), module_of_(std::move(module_of)) {
        const std::size_t n = level.flow.size();
        exit_.assign(n, 0.0);
        flow_.assign(n, 0.0);
        plogp_exit_.assign(n, 0.0);
        plogp_total_.assign(n, 0.0);
        size_.assign(n, 0);
        links_.assign(n, 0.0);
        linked_.assign(n, false);
        for (std::size_t v = 0; v < n; ++v) {
            const auto m = module_of_[v];
            flow_[m] += level.flow[v];
            ++size_[m];
            for (const auto& [u, w] : level.adjacency[v]) {
                if (module_of_[u] != m) exit_[m] += w;
            }
        }
        for (std::size_t m = 0; m < n; ++m) {
            if (size_[m] == 0) empty_.insert(m);
        }
        recompute_sums();
    }

    const std::vector<std::size_t>& module_of() const { return module_of_; }
    double codelength() const { return codelength(sum_exit_, sum_plogp_exit_, sum_plogp_total_); }
    std::optional<std::size_t> empty_module() const {
        if (empty_.empty()) return std::nullopt;
        return *empty_.begin();
    }

    // Sweeps `nodes` (every supernode when empty) in random order until a
    // sweep makes no move. Returns the number of accepted moves.
    std::size_t run(std::mt19937_64& rng, const std::function<void()>& after_sweep, std::vector<std::size_t> nodes = {}) {
        const bool all = nodes.empty();
        if (all) {
            nodes.resize(module_of_.size());
            std::iota(nodes.begin(), nodes.end(), 0);
        }
        std::size_t total_moves = 0;
        while (true) {
            for (std::size_t i = nodes.size(); i > 1; --i) std::swap(nodes[i - 1], nodes[rng() % i]);
            std::size_t moves = 0;
            for (auto v : nodes) moves += try_move(v) ? 1 : 0;
            // a full sweep is O(n) anyway, so resum to shed rounding drift
            if (all) recompute_sums();
            total_moves += moves;
            if (moves == 0) break;
            after_sweep();
        }
        return total_moves;
    }

    // Unconditional move, used to set up candidate partitions.
    void move(std::size_t v, std::size_t to) {
        const auto from = module_of_[v];
        if (from == to) return;
        double out_flow = 0.0, to_from = 0.0, to_to = 0.0;
        for (const auto& [u, w] : level_->adjacency[v]) {
            out_flow += w;
            if (module_of_[u] == from) to_from += w;
            if (module_of_[u] == to) to_to += w;
        }
        apply(v, to, exit_[from] - out_flow + 2.0 * to_from, exit_[to] + out_flow - 2.0 * to_to);
    }

    // Records moves from here on so that rollback() can undo them exactly.
    void checkpoint() {
        journal_.clear();
        journaling_ = true;
        saved_sums_ = {sum_exit_, sum_plogp_exit_, sum_plogp_total_};
    }
    // Keeps the moves made since checkpoint().
    void commit() {
        journal_.clear();
        journaling_ = false;
        recompute_sums();
    }
    void rollback() {
        for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) {
            const auto& e = *it;
            if (size_[e.to]-- == 1) empty_.insert(e.to);
            if (size_[e.from]++ == 0) empty_.erase(e.from);
            set_module(e.from, e.exit_from, e.flow_from);
            set_module(e.to, e.exit_to, e.flow_to);
            module_of_[e.v] = e.from;
        }
        journal_.clear();
        journaling_ = false;
        std::tie(sum_exit_, sum_plogp_exit_, sum_plogp_total_) = saved_sums_;
    }

private:
    struct JournalEntry {
        std::size_t v, from, to;
        double exit_from, flow_from, exit_to, flow_to;
    };

    double codelength(double sum_exit, double sum_plogp_exit, double sum_plogp_total) const {
        return plogp(sum_exit) - 2.0 * sum_plogp_exit - node_term_ + sum_plogp_total;
    }

    void set_module(std::size_t m, double exit, double flow) {
        exit_[m] = exit;
        flow_[m] = flow;
        plogp_exit_[m] = plogp(exit);
        plogp_total_[m] = plogp(exit + flow);
    }

    void recompute_sums() {
        sum_exit_ = sum_plogp_exit_ = sum_plogp_total_ = 0.0;
        for (std::size_t m = 0; m < exit_.size(); ++m) {
            if (size_[m] == 0) continue;
            set_module(m, exit_[m], flow_[m]);
            sum_exit_ += exit_[m];
            sum_plogp_exit_ += plogp_exit_[m];
            sum_plogp_total_ += plogp_total_[m];
        }
    }

    void apply(std::size_t v, std::size_t to, double exit_from_new, double exit_to_new) {
        const auto from = module_of_[v];
        const double p = level_->flow[v];
        const double flow_from_new = flow_[from] - p;
        const double flow_to_new = flow_[to] + p;
        if (journaling_) journal_.push_back({v, from, to, exit_[from], flow_[from], exit_[to], flow_[to]});
        sum_exit_ += exit_from_new + exit_to_new - exit_[from] - exit_[to];
        sum_plogp_exit_ -= plogp_exit_[from] + plogp_exit_[to];
        sum_plogp_total_ -= plogp_total_[from] + plogp_total_[to];
        if (--size_[from] == 0) {
            set_module(from, 0.0, 0.0);
            empty_.insert(from);
        } else {
            set_module(from, exit_from_new, flow_from_new);
        }
        if (size_[to]++ == 0) empty_.erase(to);
        set_module(to, exit_to_new, flow_to_new);
        sum_plogp_exit_ += plogp_exit_[from] + plogp_exit_[to];
        sum_plogp_total_ += plogp_total_[from] + plogp_total_[to];
        module_of_[v] = to;
    }

    bool try_move(std::size_t v) {
        const auto from = module_of_[v];
        const double p = level_->flow[v];

        touched_.clear();
        double out_flow = 0.0;
        for (const auto& [u, w] : level_->adjacency[v]) {
            const auto m = module_of_[u];
            if (!linked_[m]) {
                linked_[m] = true;
                touched_.push_back(m);
            }
            links_[m] += w;
            out_flow += w;
        }
        // ascending module ids keep tie-breaking deterministic
        std::sort(touched_.begin(), touched_.end());
        const double to_from = links_[from];
        std::vector<std::size_t>& candidates = touched_;
        if (size_[from] > 1 && !empty_.empty()) candidates.push_back(*empty_.begin());

        const double exit_from_new = exit_[from] - out_flow + 2.0 * to_from;
        const double flow_from_new = flow_[from] - p;
        const double partial_exit = sum_exit_ - exit_[from] + exit_from_new;
        const double partial_plogp_exit = sum_plogp_exit_ - plogp_exit_[from] + plogp(exit_from_new);
        const double partial_plogp_total = sum_plogp_total_ - plogp_total_[from] + plogp(exit_from_new + flow_from_new);

        double best = codelength() - min_improvement_;
        std::optional<std::size_t> best_module;
        double best_exit_to = 0.0;
        for (auto to : candidates) {
            if (to == from) continue;
            const double exit_to_new = exit_[to] + out_flow - 2.0 * links_[to];
            const double candidate =
                codelength(partial_exit - exit_[to] + exit_to_new,
                           partial_plogp_exit - plogp_exit_[to] + plogp(exit_to_new),
                           partial_plogp_total - plogp_total_[to] + plogp(exit_to_new + flow_[to] + p));
            if (candidate < best) {
                best = candidate;
                best_module = to;
                best_exit_to = exit_to_new;
            }
        }
        for (auto m : touched_) {
            links_[m] = 0.0;
            linked_[m] = false;
        }
        if (!best_module) return false;
        apply(v, *best_module, exit_from_new, best_exit_to);
        return true;
    }

    const Level* level_;
    double node_term_;
    double min_improvement_;
    std::vector<std::size_t> module_of_;
    std::vector<double> exit_, flow_;
    std::vector<double> plogp_exit_, plogp_total_;  // cached per module
    std::vector<std::size_t> size_;
    std::set<std::size_t> empty_;
    double sum_exit_ = 0.0, sum_plogp_exit_ = 0.0, sum_plogp_total_ = 0.0;
    std::vector<JournalEntry> journal_;
    bool journaling_ = false;
    std::tuple<double, double, double> saved_sums_;
    // scratch for try_move
    std::vector<double> links_;
    std::vector<bool> linked_;
    std::vector<std::size_t> touched_;
};

struct TrialResult {
    std::vector<std::size_t> module_of;  // per FlowGraph node
    CodelengthBreakdown codelength;
    std::vector<double> trace;
};

std::vector<std::size_t> relabel(const std::vector<std::size_t>& module_of) {
    std::map<std::size_t, std::size_t> dense;
    std::vector<std::size_t> out(module_of.size());
    for (std::size_t v = 0; v < module_of.size(); ++v) {
        out[v] = dense.emplace(module_of[v], dense.size()).first->second;
    }
    return out;
}

std::vector<std::size_t> connected_components(const FlowGraph& g) {
    std::vector<std::size_t> component(g.ids.size(), std::numeric_limits<std::size_t>::max());
    std::size_t count = 0;
    for (std::size_t start = 0; start < g.ids.size(); ++start) {
        if (component[start] != std::numeric_limits<std::size_t>::max()) continue;
        std::vector<std::size_t> stack{start};
        component[start] = count;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (const auto& [u, w] : g.adjacency[v]) {
                if (component[u] == std::numeric_limits<std::size_t>::max()) {
                    component[u] = count;
                    stack.push_back(u);
                }
            }
        }
        ++count;
    }
    return component;
}

// Local moves, then aggregation, repeated while modules keep merging. Starts
// from the modules in `node_module` and updates it in place.
void coarse_phase(const FlowGraph& g, const Level& base, std::vector<std::size_t>& node_module, std::mt19937_64& rng,
                  double min_improvement, const std::function<void()>& after_sweep) {
    Level level = aggregate(base, node_module);
    while (true) {
        std::vector<std::size_t> start(level.flow.size());
        std::iota(start.begin(), start.end(), 0);
        LocalMover mover(level, g.node_term, min_improvement, std::move(start));
        auto sync = [&] {
            for (std::size_t s = 0; s < level.members.size(); ++s) {
                for (auto v : level.members[s]) node_module[v] = mover.module_of()[s];
            }
        };
        const auto moves = mover.run(rng, [&] {
            sync();
            after_sweep();
        });
        sync();
        if (moves == 0) break;
        level = aggregate(level, mover.module_of());
    }
    node_module = relabel(node_module);
}

// The flow graph induced by `nodes`, renormalized to its own internal flow.
FlowGraph subgraph(const FlowGraph& g, const std::vector<std::size_t>& nodes) {
    std::map<std::size_t, std::size_t> local;
    for (auto v : nodes) local.emplace(v, local.size());
    FlowGraph sub;
    sub.node_flow.assign(nodes.size(), 0.0);
    sub.adjacency.resize(nodes.size());
    double total = 0.0;
    for (auto v : nodes) {
        sub.ids.push_back(g.ids[v]);
        for (const auto& [u, w] : g.adjacency[v]) {
            auto it = local.find(u);
            if (it == local.end()) continue;
            sub.adjacency[local[v]].emplace_back(it->second, w);
            total += w;
        }
    }
    if (total <= 0.0) return sub;
    for (auto& links : sub.adjacency) {
        for (auto& [u, w] : links) w /= total;
    }
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        for (const auto& [u, w] : sub.adjacency[v]) sub.node_flow[v] += w;
    }
    for (double p : sub.node_flow) sub.node_term += plogp(p);
    return sub;
}

// First-level sub-modules of a module, from local moves on the module alone
// (aggregating further would often merge them back).
std::vector<std::size_t> submodules(const FlowGraph& g, const std::vector<std::size_t>& nodes, std::mt19937_64& rng,
                                    double min_improvement) {
    std::vector<std::size_t> sub_module(nodes.size());
    std::iota(sub_module.begin(), sub_module.end(), 0);
    if (nodes.size() < 2) return sub_module;
    const auto sub = subgraph(g, nodes);
    const Level sub_base = base_level(sub);
    LocalMover mover(sub_base, sub.node_term, min_improvement, sub_module);
    mover.run(rng, [] {});
    return relabel(mover.module_of());
}

// A candidate partition: forced moves plus the region that is fine-tuned
// afterwards. Equal targets >= kFresh share one new module.
constexpr std::size_t kFresh = std::numeric_limits<std::size_t>::max() / 2;

struct Candidate {
    std::vector<std::pair<std::size_t, std::size_t>> moves;
    std::vector<std::size_t> region;
};

std::vector<std::size_t> with_neighbors(const FlowGraph& g, const std::vector<std::size_t>& nodes) {
    std::set<std::size_t> out(nodes.begin(), nodes.end());
    for (auto v : nodes) {
        for (const auto& [u, w] : g.adjacency[v]) out.insert(u);
    }
    return {out.begin(), out.end()};
}

// Single-node and single-module moves cannot leave some local optima, most
// visibly when the best answer drops the index codebook altogether. Candidates:
// each connected component collapsed, each pair of linked modules merged, and
// each module split along its sub-modules. Each candidate is applied to the
// current partition, fine-tuned around the nodes it touches and kept if that
// shortens the code. Rounds repeat until one keeps nothing.
bool escape_pass(const FlowGraph& g, const Level& base, const std::vector<std::size_t>& component,
                 std::vector<std::size_t>& node_module, std::mt19937_64& rng, double min_improvement) {
    const std::size_t n = node_module.size();
    const std::size_t components = *std::max_element(component.begin(), component.end()) + 1;
    LocalMover state(base, g.node_term, min_improvement, node_module);
    bool kept_any = false;
    while (true) {
        std::map<std::size_t, std::vector<std::size_t>> members;
        for (std::size_t v = 0; v < n; ++v) members[state.module_of()[v]].push_back(v);

        // Targets below n name "the module now holding that node"; targets at
        // or above kFresh open new modules.
        std::vector<Candidate> candidates;
        for (std::size_t c = 0; c < components; ++c) {
            Candidate cand;
            for (std::size_t v = 0; v < n; ++v) {
                if (component[v] != c) continue;
                cand.moves.emplace_back(v, cand.region.empty() ? v : cand.region.front());
                cand.region.push_back(v);
            }
            if (cand.region.size() > 1) candidates.push_back(std::move(cand));
        }
        std::set<std::pair<std::size_t, std::size_t>> linked;
        for (std::size_t v = 0; v < n; ++v) {
            for (const auto& [u, w] : g.adjacency[v]) {
                const auto a = state.module_of()[u], b = state.module_of()[v];
                if (a != b) linked.insert(std::minmax(a, b));
            }
        }
        for (const auto& [a, b] : linked) {
            Candidate cand;
            for (auto v : members[b]) cand.moves.emplace_back(v, members[a].front());
            auto touched = members[a];
            touched.insert(touched.end(), members[b].begin(), members[b].end());
            cand.region = with_neighbors(g, touched);
            candidates.push_back(std::move(cand));
        }
        for (const auto& [module, nodes] : members) {
            const auto sub = submodules(g, nodes, rng, min_improvement);
            const std::size_t count = *std::max_element(sub.begin(), sub.end()) + 1;
            if (count < 2) continue;
            const auto region = with_neighbors(g, nodes);
            Candidate all{{}, region};
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (sub[i] != 0) all.moves.emplace_back(nodes[i], kFresh + sub[i]);
            }
            candidates.push_back(std::move(all));
            if (count == 2) continue;
            for (std::size_t k = 0; k < count; ++k) {
                Candidate one{{}, region};
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    if (sub[i] == k) one.moves.emplace_back(nodes[i], kFresh);
                }
                candidates.push_back(std::move(one));
            }
        }

        bool kept = false;
        for (const auto& cand : candidates) {
            const double before = state.codelength();
            std::map<std::size_t, std::size_t> target;
            for (const auto& [v, to] : cand.moves) {
                if (to < kFresh) target.emplace(to, state.module_of()[to]);
            }
            const bool changes = std::any_of(cand.moves.begin(), cand.moves.end(), [&](const auto& m) {
                return m.second >= kFresh || state.module_of()[m.first] != target.at(m.second);
            });
            if (!changes) continue;
            state.checkpoint();
            std::map<std::size_t, std::size_t> opened;
            for (const auto& [v, to] : cand.moves) {
                if (to < kFresh) {
                    state.move(v, target.at(to));
                    continue;
                }
                auto it = opened.find(to);
                if (it == opened.end()) it = opened.emplace(to, *state.empty_module()).first;
                state.move(v, it->second);
            }
            state.run(rng, [] {}, cand.region);
            if (state.codelength() < before - min_improvement) {
                state.commit();
                kept = true;
            } else {
                state.rollback();
            }
        }
        if (!kept) break;
        kept_any = true;
    }
    if (!kept_any) return false;
    auto next = relabel(state.module_of());
    if (!(codelength_of(g, next).total_bits < codelength_of(g, node_module).total_bits - min_improvement)) {
        return false;
    }
    node_module = std::move(next);
    return true;
}

// Splits every module into its sub-modules, then moves whole sub-modules
// between modules.
void submodule_moves(const FlowGraph& g, const Level& base, std::vector<std::size_t>& node_module,
                     std::mt19937_64& rng, double min_improvement, const std::function<void()>& after_sweep) {
    std::map<std::size_t, std::vector<std::size_t>> modules;
    for (std::size_t v = 0; v < node_module.size(); ++v) modules[node_module[v]].push_back(v);

    std::vector<std::size_t> submodule(node_module.size());
    std::vector<std::size_t> parent;  // per sub-module
    for (const auto& [module, nodes] : modules) {
        const auto sub = submodules(g, nodes, rng, min_improvement);
        const std::size_t offset = parent.size();
        const std::size_t count = *std::max_element(sub.begin(), sub.end()) + 1;
        for (std::size_t i = 0; i < nodes.size(); ++i) submodule[nodes[i]] = offset + sub[i];
        parent.insert(parent.end(), count, module);
    }
    if (parent.size() == modules.size()) return;

    const Level level = aggregate(base, submodule);
    // aggregate() numbers supernodes by first appearance; map each back to its parent module.
    std::vector<std::size_t> start(level.flow.size());
    for (std::size_t s = 0; s < level.members.size(); ++s) start[s] = parent[submodule[level.members[s].front()]];
    LocalMover mover(level, g.node_term, min_improvement, std::move(start));
    auto sync = [&] {
        for (std::size_t s = 0; s < level.members.size(); ++s) {
            for (auto v : level.members[s]) node_module[v] = mover.module_of()[s];
        }
    };
    mover.run(rng, [&] {
        sync();
        after_sweep();
    });
    sync();
    node_module = relabel(node_module);
}

TrialResult run_trial(const FlowGraph& g, std::mt19937_64& rng, double min_improvement) {
    const std::size_t n = g.ids.size();
    TrialResult result;
    result.module_of.resize(n);
    std::iota(result.module_of.begin(), result.module_of.end(), 0);
    auto& node_module = result.module_of;

    auto record = [&] { result.trace.push_back(codelength_of(g, relabel(node_module)).total_bits); };
    record();

    const Level base = base_level(g);
    const auto component = connected_components(g);
    double previous = std::numeric_limits<double>::infinity();
    while (true) {
        coarse_phase(g, base, node_module, rng, min_improvement, record);

        // Fine tuning: single original nodes against the current modules.
        LocalMover fine(base, g.node_term, min_improvement, node_module);
        fine.run(rng, [&] {
            node_module = fine.module_of();
            record();
        });
        node_module = relabel(fine.module_of());
        if (escape_pass(g, base, component, node_module, rng, min_improvement)) record();
        submodule_moves(g, base, node_module, rng, min_improvement, record);

        const double current = codelength_of(g, node_module).total_bits;
        if (!(current < previous - min_improvement)) break;
        previous = current;
    }
    result.codelength = codelength_of(g, node_module);
    return result;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

CodelengthBreakdown map_equation(const ColexNetwork& network, const Partition& partition) {
    for (const auto& [id, unused] : partition.assignment) {
        if (!network.has_node(id)) throw Error(ErrorKind::UnknownConcept, id + " is not a network node");
    }
    const auto g = make_flow_graph(network);
    std::vector<std::size_t> raw(g.ids.size());
    for (std::size_t v = 0; v < g.ids.size(); ++v) {
        auto it = partition.assignment.find(g.ids[v]);
        if (it == partition.assignment.end()) throw Error(ErrorKind::UncoveredNode, g.ids[v]);
        if (it->second < 0) throw Error(ErrorKind::InconsistentInputs, "negative community for " + g.ids[v]);
        raw[v] = static_cast<std::size_t>(it->second);
    }
    return codelength_of(g, relabel(raw));
}

Partition canonical_partition(const ColexNetwork& network, const std::map<std::string, int>& grouping) {
    std::map<int, std::vector<std::string>> groups;
    std::vector<std::string> isolated;
    for (std::size_t i = 0; i < network.nodes().size(); ++i) {
        const auto& id = network.nodes()[i].id;
        if (network.incident_edges(i).empty()) {
            isolated.push_back(id);
            continue;
        }
        auto it = grouping.find(id);
        if (it == grouping.end()) throw Error(ErrorKind::UncoveredNode, id);
        groups[it->second].push_back(id);
    }
    std::vector<std::vector<std::string>> ordered;
    for (auto& [label, members] : groups) ordered.push_back(std::move(members));
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });

    Partition out;
    for (const auto& members : ordered) {
        for (const auto& id : members) out.assignment[id] = out.num_communities;
        ++out.num_communities;
    }
    for (const auto& id : isolated) out.assignment[id] = out.num_communities++;
    return out;
}

CommunityDetection detect_communities(const ColexNetwork& network, std::uint64_t seed, const DetectOptions& options) {
    CommunityDetection out;
    const auto g = make_flow_graph(network);
    if (g.ids.empty()) {
        out.partition = canonical_partition(network, {});
        return out;
    }

    const int trials = std::max(options.trials, 1);
    std::vector<TrialResult> results(static_cast<std::size_t>(trials));
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(options.threads))
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t))));
        results[static_cast<std::size_t>(t)] = run_trial(g, rng, options.min_improvement);
    }
    // first strictly shortest trial wins, as in a serial loop
    std::optional<TrialResult> best;
    for (auto& trial : results) {
        if (!best || trial.codelength.total_bits < best->codelength.total_bits) best = std::move(trial);
    }

    std::map<std::string, int> grouping;
    for (std::size_t v = 0; v < g.ids.size(); ++v) grouping[g.ids[v]] = static_cast<int>(best->module_of[v]);
    out.partition = canonical_partition(network, grouping);
    out.codelength = best->codelength;
    out.trace = std::move(best->trace);
    return out;
}

CommunityStats community_stats(const Partition& partition, const ColexNetwork& network) {
    std::set<int> communities;
    std::size_t nodes = 0;
    for (std::size_t i = 0; i < network.nodes().size(); ++i) {
        if (network.incident_edges(i).empty()) continue;
        auto it = partition.assignment.find(network.nodes()[i].id);
        if (it == partition.assignment.end()) throw Error(ErrorKind::UncoveredNode, network.nodes()[i].id);
        communities.insert(it->second);
        ++nodes;
    }
    CommunityStats stats;
    stats.count = communities.size();
    if (stats.count) stats.mean_size = static_cast<double>(nodes) / static_cast<double>(stats.count);
    return stats;
}

void apply_partition(ColexNetwork& network, const Partition& partition) {
    network.clear_communities();
    for (const auto& [id, community] : partition.assignment) network.set_community(id, community);
}

void write_partition_csv(const Partition& partition, const std::filesystem::path& path) {
    csv::Table table{{"concept_id", "community"}, {}};
    for (const auto& [id, community] : partition.assignment) table.rows.push_back({id, std::to_string(community)});
    csv::write_file(path, table);
}

Partition read_partition_csv(const std::filesystem::path& path) {
    const auto table = csv::read_file(path);
    const auto id_col = table.require_column("concept_id", path.string());
    const auto community_col = table.require_column("community", path.string());
    Partition out;
    std::set<int> seen;
    for (const auto& row : table.rows) {
        int community = 0;
        try {
            community = std::stoi(row[community_col]);
        } catch (const std::exception&) {
            throw Error(ErrorKind::MalformedCsv, path.string() + ": bad community '" + row[community_col] + "'");
        }
        if (!out.assignment.emplace(row[id_col], community).second) {
            throw Error(ErrorKind::DuplicateId, path.string() + ": concept " + row[id_col]);
        }
        seen.insert(community);
    }
    out.num_communities = static_cast<int>(seen.size());
    if (!seen.empty() && (*seen.begin() != 0 || *seen.rbegin() != out.num_communities - 1)) {
        throw Error(ErrorKind::InconsistentInputs, path.string() + ": community ids are not dense");
    }
    return out;
}

}  // namespace colexforge
