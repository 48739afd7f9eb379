#include "dmapper/mapper_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "dmapper/error.hpp"
#include "union_find.hpp"

namespace dmapper {

std::string to_string(Metric m) { return m == Metric::Euclidean ? "euclidean" : "precomputed"; }

Metric parse_metric(const std::string& text) {
    if (text == "euclidean") return Metric::Euclidean;
    if (text == "precomputed") return Metric::Precomputed;
    throw ConfigError("metric must be 'euclidean' or 'precomputed', got '" + text + "'");
}

void DbscanParams::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("dbscan.eps must be > 0");
    if (min_samples < 1) throw ConfigError("dbscan.min_samples must be >= 1");
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Core flags, core connectivity and border attachment, shared by both
// neighbourhood strategies.
std::vector<int> finish_labels(const std::vector<bool>& core, detail::UnionFind& uf,
                               const std::vector<std::size_t>& border_core) {
    const std::size_t m = core.size();
    std::vector<std::size_t> first_core(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
        if (!core[i]) continue;
        const std::size_t r = uf.find(i);
        if (first_core[r] == kNone) first_core[r] = i;
    }
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < m; ++i) {
        if (core[i] && first_core[uf.find(i)] == i) roots.push_back(i);
    }
    // roots are already ordered by their first core position
    std::vector<int> root_label(m, kNoise);
    for (std::size_t k = 0; k < roots.size(); ++k) root_label[uf.find(roots[k])] = static_cast<int>(k);
    std::vector<int> labels(m, kNoise);
    for (std::size_t i = 0; i < m; ++i) {
        if (core[i]) {
            labels[i] = root_label[uf.find(i)];
        } else if (border_core[i] != kNone) {
            labels[i] = root_label[uf.find(border_core[i])];
        }
    }
    return labels;
}

template <class Within>
std::vector<int> dbscan_quadratic(std::size_t m, std::size_t min_samples, Within within) {
    std::vector<bool> core(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < m && count < min_samples; ++j) {
            if (i == j || within(i, j)) ++count;
        }
        core[i] = count >= min_samples;
    }
    detail::UnionFind uf(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!core[i]) continue;
        for (std::size_t j = i + 1; j < m; ++j) {
            if (core[j] && uf.find(i) != uf.find(j) && within(i, j)) uf.unite(i, j);
        }
    }
    std::vector<std::size_t> border(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
        if (core[i]) continue;
        for (std::size_t j = 0; j < m; ++j) {
            if (core[j] && within(i, j)) {
                border[i] = j;
                break;
            }
        }
    }
    return finish_labels(core, uf, border);
}

using CellKey = std::array<std::int64_t, 4>;

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto v : k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// Uniform grid with cells small enough that any two points sharing a cell
// are within eps of each other.
std::vector<int> dbscan_grid(const PointCloud& pc, const IndexSet& subset, double eps, std::size_t min_samples) {
    const std::size_t m = subset.size();
    const std::size_t d = pc.dim();
    const double side = eps / std::sqrt(static_cast<double>(d)) * (1.0 - 1e-9);
    const double eps2 = eps * eps;

    std::unordered_map<CellKey, std::size_t, CellKeyHash> index;
    std::vector<CellKey> keys;
    std::vector<std::vector<std::size_t>> cells;
    std::vector<std::size_t> cell_of(m);
    for (std::size_t i = 0; i < m; ++i) {
        CellKey key{0, 0, 0, 0};
        for (std::size_t k = 0; k < d; ++k) key[k] = static_cast<std::int64_t>(std::floor(pc.at(subset[i], k) / side));
        auto [it, fresh] = index.try_emplace(key, cells.size());
        if (fresh) {
            keys.push_back(key);
            cells.emplace_back();
        }
        cells[it->second].push_back(i);
        cell_of[i] = it->second;
    }

    // offsets whose closest approach is within eps
    const auto reach = static_cast<std::int64_t>(std::ceil(eps / side));
    std::vector<CellKey> offsets;
    CellKey off{0, 0, 0, 0};
    const auto gen = [&](auto&& self, std::size_t axis) -> void {
        if (axis == d) {
            double gap2 = 0.0;
            bool zero = true;
            for (std::size_t k = 0; k < d; ++k) {
                const double g = static_cast<double>(std::max<std::int64_t>(std::llabs(off[k]) - 1, 0)) * side;
                gap2 += g * g;
                zero = zero && off[k] == 0;
            }
            if (!zero && gap2 <= eps2) offsets.push_back(off);
            return;
        }
        for (std::int64_t o = -reach; o <= reach; ++o) {
            off[axis] = o;
            self(self, axis + 1);
        }
        off[axis] = 0;
    };
    gen(gen, 0);

    std::vector<std::vector<std::size_t>> neighbours(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (const auto& o : offsets) {
            CellKey k = keys[c];
            for (std::size_t a = 0; a < d; ++a) k[a] += o[a];
            if (auto it = index.find(k); it != index.end()) neighbours[c].push_back(it->second);
        }
    }

    const auto within = [&](std::size_t i, std::size_t j) { return pc.sq_distance(subset[i], subset[j]) <= eps2; };

    std::vector<bool> core(m, false);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t c = cell_of[i];
        std::size_t count = cells[c].size();
        for (std::size_t nc : neighbours[c]) {
            if (count >= min_samples) break;
            for (std::size_t j : cells[nc]) {
                if (within(i, j) && ++count >= min_samples) break;
            }
        }
        core[i] = count >= min_samples;
    }

    detail::UnionFind uf(m);
    std::vector<std::vector<std::size_t>> core_in(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::size_t i : cells[c]) {
            if (core[i]) core_in[c].push_back(i);
        }
        for (std::size_t k = 1; k < core_in[c].size(); ++k) uf.unite(core_in[c][0], core_in[c][k]);
    }
    for (std::size_t a = 0; a < cells.size(); ++a) {
        if (core_in[a].empty()) continue;
        for (std::size_t b : neighbours[a]) {
            if (b < a || core_in[b].empty()) continue;
            if (uf.find(core_in[a][0]) == uf.find(core_in[b][0])) continue;
            bool linked = false;
            for (std::size_t i : core_in[a]) {
                for (std::size_t j : core_in[b]) {
                    if (within(i, j)) {
                        linked = true;
                        break;
                    }
                }
                if (linked) break;
            }
            if (linked) uf.unite(core_in[a][0], core_in[b][0]);
        }
    }

    std::vector<std::size_t> border(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
        if (core[i]) continue;
        const std::size_t c = cell_of[i];
        std::size_t best = core_in[c].empty() ? kNone : core_in[c].front();
        for (std::size_t nc : neighbours[c]) {
            for (std::size_t j : core_in[nc]) {
                if (j >= best) break;  // ascending within a cell
                if (within(i, j)) {
                    best = j;
                    break;
                }
            }
        }
        border[i] = best;
    }
    return finish_labels(core, uf, border);
}

}  // namespace

std::vector<int> dbscan(const Dataset& data, const IndexSet& subset, const DbscanParams& params) {
    params.validate();
    if (subset.empty()) throw DataError("dbscan needs a non-empty subset");
    for (std::size_t i : subset) {
        if (i >= data.size()) throw DataError("dbscan subset index out of range");
    }
    if (params.metric == Metric::Precomputed) {
        if (data.is_points()) throw ConfigError("metric 'precomputed' requires a distance matrix");
        const DistanceMatrix& dm = data.matrix();
        return dbscan_quadratic(subset.size(), params.min_samples,
                                [&](std::size_t i, std::size_t j) { return dm(subset[i], subset[j]) <= params.eps; });
    }
    if (!data.is_points()) throw ConfigError("metric 'euclidean' requires point coordinates");
    const PointCloud& pc = data.points();
    if (pc.dim() <= 4) return dbscan_grid(pc, subset, params.eps, params.min_samples);
    const double eps2 = params.eps * params.eps;
    return dbscan_quadratic(subset.size(), params.min_samples,
                            [&](std::size_t i, std::size_t j) { return pc.sq_distance(subset[i], subset[j]) <= eps2; });
}

MapperGraph build_nerve(const std::vector<IndexSet>& preimages, const ClusterFn& cluster_fn,
                        const FilterValues& filter_values) {
    MapperGraph g;
    const std::size_t n_points = filter_values.size();
    std::vector<std::uint8_t> seen(n_points, 0), clustered(n_points, 0);
    for (std::size_t k = 0; k < preimages.size(); ++k) {
        const IndexSet& pre = preimages[k];
        if (pre.empty()) continue;
        const std::vector<int> labels = cluster_fn(pre);
        if (labels.size() != pre.size()) throw DataError("cluster function returned the wrong number of labels");
        int n_clusters = 0;
        for (int l : labels) n_clusters = std::max(n_clusters, l + 1);
        std::vector<MapperNode> local(static_cast<std::size_t>(n_clusters));
        for (std::size_t t = 0; t < pre.size(); ++t) {
            seen[pre[t]] = 1;
            if (labels[t] == kNoise) continue;
            local[static_cast<std::size_t>(labels[t])].members.push_back(pre[t]);
            clustered[pre[t]] = 1;
        }
        for (auto& node : local) {
            if (node.members.empty()) continue;
            std::sort(node.members.begin(), node.members.end());
            node.id = g.nodes.size();
            node.interval_index = k;
            g.nodes.push_back(std::move(node));
        }
    }
    for (std::size_t i = 0; i < n_points; ++i) {
        if (seen[i] && !clustered[i]) ++g.dropped_noise;
    }

    // point -> nodes containing it, then all pairs per point
    std::vector<std::vector<std::size_t>> owners(n_points);
    for (const auto& node : g.nodes) {
        for (std::size_t p : node.members) owners[p].push_back(node.id);
    }
    for (const auto& own : owners) {
        for (std::size_t a = 0; a < own.size(); ++a) {
            for (std::size_t b = a + 1; b < own.size(); ++b) g.edges.emplace_back(std::min(own[a], own[b]), std::max(own[a], own[b]));
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    node_values(g, filter_values);
    return g;
}

std::vector<double> node_values(MapperGraph& graph, const FilterValues& filter_values) {
    std::vector<double> out;
    out.reserve(graph.nodes.size());
    for (auto& node : graph.nodes) {
        double s = 0.0;
        for (std::size_t p : node.members) s += filter_values[p];
        node.mean_filter = s / static_cast<double>(node.members.size());
        out.push_back(node.mean_filter);
    }
    return out;
}

std::vector<std::size_t> component_labels(std::size_t node_count,
                                          const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    detail::UnionFind uf(node_count);
    for (auto [u, v] : edges) uf.unite(u, v);
    std::vector<std::size_t> root_label(node_count, kNone), labels(node_count);
    std::size_t next = 0;
    for (std::size_t i = 0; i < node_count; ++i) {
        const std::size_t r = uf.find(i);
        if (root_label[r] == kNone) root_label[r] = next++;
        labels[i] = root_label[r];
    }
    return labels;
}

GraphSummary graph_summary(const MapperGraph& graph) {
    GraphSummary s;
    s.node_count = graph.nodes.size();
    s.edge_count = graph.edges.size();
    const auto labels = component_labels(s.node_count, graph.edges);
    s.components = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    s.cycle_rank = s.edge_count + s.components - s.node_count;
    return s;
}

}  // namespace dmapper
