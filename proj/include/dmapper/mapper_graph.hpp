#pragma once
// Density clustering inside each preimage and the nerve (1-skeleton) built
// from the resulting clusters.

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dmapper/core_data.hpp"
#include "dmapper/cover.hpp"

namespace dmapper {

enum class Metric { Euclidean, Precomputed };

std::string to_string(Metric m);
Metric parse_metric(const std::string& text);

struct DbscanParams {
    double eps = 0.5;
    std::size_t min_samples = 3;
    Metric metric = Metric::Euclidean;

    void validate() const;
    bool operator==(const DbscanParams&) const = default;
};

inline constexpr int kNoise = -1;

/// DBSCAN over `subset` (indices into `data`). Returns one label per subset
/// entry: clusters are numbered 0.. in order of their first core point in
/// `subset`, noise is kNoise. A point is core when at least `min_samples`
/// subset points (itself included) lie within distance <= eps. A border point
/// joins the cluster of its lowest-position core neighbour.
std::vector<int> dbscan(const Dataset& data, const IndexSet& subset, const DbscanParams& params);

struct MapperNode {
    std::size_t id = 0;
    std::vector<std::size_t> members;  // ascending global indices
    std::size_t interval_index = 0;
    double mean_filter = 0.0;
};

struct MapperGraph {
    std::vector<MapperNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // u < v, sorted
    std::size_t dropped_noise = 0;
};

using ClusterFn = std::function<std::vector<int>(const IndexSet&)>;

/// One node per cluster per preimage, ids assigned by (interval, label);
/// an edge joins every pair of nodes whose member sets intersect.
MapperGraph build_nerve(const std::vector<IndexSet>& preimages, const ClusterFn& cluster_fn,
                        const FilterValues& filter_values);

/// Mean filter value of each node's members; also stored into mean_filter.
std::vector<double> node_values(MapperGraph& graph, const FilterValues& filter_values);

struct GraphSummary {
    std::size_t components = 0;
    std::size_t cycle_rank = 0;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
};

GraphSummary graph_summary(const MapperGraph& graph);

/// Connected-component index per node (components numbered by smallest node id).
std::vector<std::size_t> component_labels(std::size_t node_count,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& edges);

}  // namespace dmapper
