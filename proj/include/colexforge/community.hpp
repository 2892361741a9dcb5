#pragma once

#include "colexforge/network.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace colexforge {

struct Partition {
    std::map<std::string, int> assignment;  // concept -> community in [0, num_communities)
    int num_communities = 0;

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Two-level map equation in bits: total = index (q H(Q)) + module (sum p H(P)).
struct CodelengthBreakdown {
    double total_bits = 0.0;
    double index_bits = 0.0;
    double module_bits = 0.0;
};

/// Undirected flow: each node is visited in proportion to its weighted degree.
/// Every non-isolated node must be assigned (UncoveredNode otherwise);
/// isolated nodes carry no flow.
CodelengthBreakdown map_equation(const ColexNetwork& network, const Partition& partition);

struct DetectOptions {
    int trials = 8;
    double min_improvement = 1e-10;
    // Trials run concurrently; 0 means the OpenMP default. The result does not
    // depend on it.
    int threads = 0;
};

struct CommunityDetection {
    Partition partition;
    CodelengthBreakdown codelength;
    // Codelength after every accepted move sweep of the winning trial.
    std::vector<double> trace;
};

/// Greedy local moves with module aggregation, single-node fine tuning and
/// merge/split refinement, best of `trials` runs seeded from `seed`. Deterministic for a given
/// network, seed and options.
CommunityDetection detect_communities(const ColexNetwork& network, std::uint64_t seed,
                                      const DetectOptions& options = {});

/// Relabels an arbitrary grouping so that non-isolated modules are numbered by
/// (size desc, smallest member) and isolated nodes follow as singletons in id order.
Partition canonical_partition(const ColexNetwork& network, const std::map<std::string, int>& grouping);

struct CommunityStats {
    std::size_t count = 0;
    double mean_size = 0.0;
};

/// Communities and mean community size over non-isolated nodes.
CommunityStats community_stats(const Partition& partition, const ColexNetwork& network);

void apply_partition(ColexNetwork& network, const Partition& partition);

void write_partition_csv(const Partition& partition, const std::filesystem::path& path);
Partition read_partition_csv(const std::filesystem::path& path);

}  // namespace colexforge
