#include "dmapper/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "dmapper/error.hpp"

namespace dmapper {

Json graph_to_json(const MapperGraph& graph, const Json& params) {
    Json nodes = Json::array();
    for (const auto& node : graph.nodes) {
        nodes.push_back({{"id", node.id},
                         {"interval", node.interval_index},
                         {"members", node.members},
                         {"mean_filter", node.mean_filter},
                         {"size", node.members.size()}});
    }
    Json edges = Json::array();
    for (auto [u, v] : graph.edges) edges.push_back({u, v});
    return {{"nodes", nodes}, {"edges", edges}, {"params", params}, {"dropped_noise", graph.dropped_noise}};
}

MapperGraph graph_from_json(const Json& j) {
    try {
        MapperGraph g;
        for (const auto& n : j.at("nodes")) {
            MapperNode node;
            node.id = n.at("id").get<std::size_t>();
            node.interval_index = n.at("interval").get<std::size_t>();
            node.members = n.at("members").get<std::vector<std::size_t>>();
            node.mean_filter = n.at("mean_filter").get<double>();
            if (node.id != g.nodes.size()) throw DataError("graph node ids must be dense and ordered from 0");
            if (node.members.empty()) throw DataError("graph node " + std::to_string(node.id) + " has no members");
            g.nodes.push_back(std::move(node));
        }
        for (const auto& e : j.at("edges")) {
            auto u = e.at(0).get<std::size_t>();
            auto v = e.at(1).get<std::size_t>();
            if (u == v || u >= g.nodes.size() || v >= g.nodes.size()) throw DataError("graph edge has invalid endpoints");
            if (u > v) std::swap(u, v);
            g.edges.emplace_back(u, v);
        }
        std::sort(g.edges.begin(), g.edges.end());
        g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
        if (j.contains("dropped_noise")) g.dropped_noise = j.at("dropped_noise").get<std::size_t>();
        return g;
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed graph JSON: ") + e.what());
    }
}

Json cover_to_json(const Cover& cover) {
    Json intervals = Json::array();
    for (const auto& iv : cover.intervals) intervals.push_back({iv.start, iv.end});
    Json j{{"mode", to_string(cover.mode)}, {"n", cover.n}, {"intervals", intervals}};
    j[cover.mode == CoverMode::DMapper ? "alpha" : "p"] = cover.param;
    return j;
}

Json gmm_to_json(const GaussianMixture1D& gmm) {
    return {{"weights", gmm.weights()}, {"means", gmm.means()}, {"stddevs", gmm.stddevs()}};
}

Json diagram_json(const ExtendedDiagram& d) { return Json::parse(diagram_to_json(d)); }

Json summary_to_json(const GraphSummary& s) {
    return {{"components", s.components}, {"cycle_rank", s.cycle_rank}, {"node_count", s.node_count},
            {"edge_count", s.edge_count}};
}

Json report_to_json(const EvalReport& r, bool with_replicates) {
    Json j{{"param", r.param},
           {"sc", r.sc},
           {"sc_norm", r.sc_norm},
           {"tsr", r.tsr},
           {"sc_adj", r.sc_adj},
           {"d_eps", r.d_eps},
           {"diagram", diagram_json(r.diagram)},
           {"failed_replicates", r.failed_replicates},
           {"graph", summary_to_json(r.summary)},
           {"uncovered", r.uncovered}};
    if (with_replicates) {
        Json reps = Json::array();
        for (const auto& d : r.replicate_distances) reps.push_back(d ? Json(*d) : Json(nullptr));
        j["replicate_distances"] = reps;
    }
    return j;
}

namespace {

void round_floats(Json& j) {
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) return;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        double r = std::strtod(buf, nullptr);
        if (r == 0.0) r = 0.0;  // drop negative zero
        j = r;
    } else if (j.is_structured()) {
        for (auto& child : j) round_floats(child);
    }
}

}  // namespace

std::string canonical_dump(const Json& j, int indent) {
    Json copy = j;
    round_floats(copy);
    return copy.dump(indent) + "\n";
}

std::string graph_to_dot(const MapperGraph& graph) {
    double lo = 0.0, hi = 0.0;
    if (!graph.nodes.empty()) {
        const auto [mn, mx] = std::minmax_element(graph.nodes.begin(), graph.nodes.end(), [](const auto& a, const auto& b) {
            return a.mean_filter < b.mean_filter;
        });
        lo = mn->mean_filter;
        hi = mx->mean_filter;
    }
    std::ostringstream out;
    out << "graph mapper {\n  node [style=filled];\n";
    for (const auto& node : graph.nodes) {
        const double t = hi > lo ? (node.mean_filter - lo) / (hi - lo) : 0.5;
        const int red = static_cast<int>(std::lround(255.0 * t));
        char color[8];
        std::snprintf(color, sizeof color, "#%02x00%02x", red, 255 - red);
        out << "  " << node.id << " [label=\"" << node.id << "\", tooltip=\"" << node.members.size()
            << "\", fillcolor=\"" << color << "\"];\n";
    }
    for (auto [u, v] : graph.edges) out << "  " << u << " -- " << v << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace dmapper
