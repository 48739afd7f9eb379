#include "dmapper/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "dmapper/error.hpp"

namespace dmapper {

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::Ord0: return "Ord0";
        case PointClass::Rel1: return "Rel1";
        case PointClass::Ext0: return "Ext0";
        case PointClass::Ext1: return "Ext1";
    }
    return "?";
}

PointClass parse_point_class(const std::string& text) {
    for (PointClass c : kAllClasses) {
        if (to_string(c) == text) return c;
    }
    throw DataError("unknown diagram class '" + text + "'");
}

double DiagramPoint::half_persistence() const { return std::abs(death - birth) / 2.0; }

std::size_t ExtendedDiagram::count(PointClass c) const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [c](const auto& p) { return p.cls == c; }));
}

std::vector<DiagramPoint> ExtendedDiagram::of_class(PointClass c) const {
    std::vector<DiagramPoint> out;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out), [c](const auto& p) { return p.cls == c; });
    return out;
}

namespace {

enum class Kind { Apex, Vertex, Edge, ConeEdge, ConeTriangle };

struct Simplex {
    Kind kind;
    double value;
    std::vector<std::size_t> boundary;  // ascending filtration indices
};

bool point_less(const DiagramPoint& a, const DiagramPoint& b) {
    if (a.cls != b.cls) return a.cls < b.cls;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
}

// Symmetric difference of two sorted index lists.
void add_column(std::vector<std::size_t>& target, const std::vector<std::size_t>& source) {
    std::vector<std::size_t> out;
    out.reserve(target.size() + source.size());
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(), std::back_inserter(out));
    target.swap(out);
}

}  // namespace

ExtendedDiagram extended_diagram(std::size_t n_vertices, const EdgeList& edges, std::span<const double> values,
                                 bool keep_zero_persistence) {
    if (values.size() != n_vertices) throw DataError("need one value per graph vertex");
    for (double v : values) {
        if (!std::isfinite(v)) throw DataError("vertex values must be finite");
    }
    for (auto [u, v] : edges) {
        if (u >= n_vertices || v >= n_vertices || u == v) throw DataError("edge endpoints must be distinct vertices");
    }

    // strict total order on vertices: (value, id)
    std::vector<std::size_t> order(n_vertices);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] != values[b] ? values[a] < values[b] : a < b;
    });
    std::vector<std::size_t> rank(n_vertices);
    for (std::size_t r = 0; r < n_vertices; ++r) rank[order[r]] = r;

    // edges grouped by their later (upper) and earlier (lower) endpoint
    std::vector<std::vector<std::size_t>> upper_of(n_vertices), lower_of(n_vertices);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto [u, v] = edges[e];
        if (rank[u] > rank[v]) std::swap(u, v);
        upper_of[v].push_back(e);
        lower_of[u].push_back(e);
    }
    const auto other_rank = [&](std::size_t e, std::size_t vertex) {
        return rank[edges[e].first == vertex ? edges[e].second : edges[e].first];
    };

    std::vector<Simplex> simplices;
    simplices.push_back({Kind::Apex, 0.0, {}});
    std::vector<std::size_t> vertex_idx(n_vertices), edge_idx(edges.size()), cone_idx(n_vertices);
    for (std::size_t v : order) {
        vertex_idx[v] = simplices.size();
        simplices.push_back({Kind::Vertex, values[v], {}});
        auto& ups = upper_of[v];
        std::sort(ups.begin(), ups.end(), [&](auto a, auto b) { return other_rank(a, v) < other_rank(b, v); });
        for (std::size_t e : ups) {
            edge_idx[e] = simplices.size();
            std::vector<std::size_t> bd{vertex_idx[edges[e].first], vertex_idx[edges[e].second]};
            std::sort(bd.begin(), bd.end());
            simplices.push_back({Kind::Edge, values[v], std::move(bd)});
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t v = *it;
        cone_idx[v] = simplices.size();
        simplices.push_back({Kind::ConeEdge, values[v], {0, vertex_idx[v]}});
        auto& lows = lower_of[v];
        std::sort(lows.begin(), lows.end(), [&](auto a, auto b) { return other_rank(a, v) > other_rank(b, v); });
        for (std::size_t e : lows) {
            std::vector<std::size_t> bd{edge_idx[e], cone_idx[edges[e].first], cone_idx[edges[e].second]};
            std::sort(bd.begin(), bd.end());
            simplices.push_back({Kind::ConeTriangle, values[v], std::move(bd)});
        }
    }

    // standard column reduction over Z/2
    const std::size_t m = simplices.size();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pivot_owner(m, kNone);
    std::vector<std::vector<std::size_t>> columns(m);
    ExtendedDiagram out;
    for (std::size_t j = 0; j < m; ++j) {
        auto& col = columns[j];
        col = simplices[j].boundary;
        while (!col.empty() && pivot_owner[col.back()] != kNone) add_column(col, columns[pivot_owner[col.back()]]);
        if (col.empty()) continue;
        const std::size_t i = col.back();
        pivot_owner[i] = j;

        const Simplex& birth = simplices[i];
        const Simplex& death = simplices[j];
        PointClass cls;
        if (birth.kind == Kind::Vertex && death.kind == Kind::Edge) {
            cls = PointClass::Ord0;
        } else if (birth.kind == Kind::Vertex && death.kind == Kind::ConeEdge) {
            cls = PointClass::Ext0;
        } else if (birth.kind == Kind::Edge && death.kind == Kind::ConeTriangle) {
            cls = PointClass::Ext1;
        } else if (birth.kind == Kind::ConeEdge && death.kind == Kind::ConeTriangle) {
            cls = PointClass::Rel1;
        } else {
            throw NumericError("unexpected persistence pair in cone filtration");
        }
        if (!keep_zero_persistence && birth.value == death.value) continue;
        out.points.push_back({birth.value, death.value, cls});
    }
    std::sort(out.points.begin(), out.points.end(), point_less);
    return out;
}

ExtendedDiagram extended_diagram(const MapperGraph& graph, std::span<const double> values, bool keep_zero_persistence) {
    if (graph.nodes.empty()) throw DataError("cannot compute a diagram of an empty graph");
    return extended_diagram(graph.nodes.size(), graph.edges, values, keep_zero_persistence);
}

namespace {

// Kuhn's augmenting paths; adjacency from left to right vertices.
class BipartiteMatcher {
public:
    explicit BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right)
        : adj_(adj), match_right_(n_right, kFree) {}

    std::size_t max_matching() {
        std::size_t size = 0;
        for (std::size_t u = 0; u < adj_.size(); ++u) {
            visited_.assign(match_right_.size(), 0);
            if (augment(u)) ++size;
        }
        return size;
    }

private:
    static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

    bool augment(std::size_t u) {
        for (std::size_t v : adj_[u]) {
            if (visited_[v]) continue;
            visited_[v] = 1;
            if (match_right_[v] == kFree || augment(match_right_[v])) {
                match_right_[v] = u;
                return true;
            }
        }
        return false;
    }

    const std::vector<std::vector<std::size_t>>& adj_;
    std::vector<std::size_t> match_right_;
    std::vector<unsigned char> visited_;
};

double linf(const DiagramPoint& a, const DiagramPoint& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

}  // namespace

double bottleneck_points(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b) {
    const std::size_t na = a.size(), nb = b.size();
    if (na == 0 && nb == 0) return 0.0;

    std::vector<double> candidates{0.0};
    for (const auto& p : a) candidates.push_back(p.half_persistence());
    for (const auto& q : b) candidates.push_back(q.half_persistence());
    for (const auto& p : a) {
        for (const auto& q : b) candidates.push_back(linf(p, q));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // left: a[0..na) then diagonal images of b; right: b[0..nb) then diagonal images of a
    const auto feasible = [&](double t) {
        std::vector<std::vector<std::size_t>> adj(na + nb);
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t j = 0; j < nb; ++j) {
                if (linf(a[i], b[j]) <= t) adj[i].push_back(j);
            }
            if (a[i].half_persistence() <= t) adj[i].push_back(nb + i);
        }
        for (std::size_t j = 0; j < nb; ++j) {
            if (b[j].half_persistence() <= t) adj[na + j].push_back(j);
            for (std::size_t i = 0; i < na; ++i) adj[na + j].push_back(nb + i);
        }
        return BipartiteMatcher(adj, na + nb).max_matching() == na + nb;
    };

    std::size_t lo = 0, hi = candidates.size() - 1;  // candidates[hi] is always feasible
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return candidates[lo];
}

double bottleneck(const ExtendedDiagram& a, const ExtendedDiagram& b) {
    double d = 0.0;
    for (PointClass c : kAllClasses) {
        const auto pa = a.of_class(c);
        const auto pb = b.of_class(c);
        d = std::max(d, bottleneck_points(pa, pb));
    }
    return d;
}

std::string diagram_to_json(const ExtendedDiagram& d) {
    auto sorted = d.points;
    std::sort(sorted.begin(), sorted.end(), point_less);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : sorted) arr.push_back({{"class", to_string(p.cls)}, {"birth", p.birth}, {"death", p.death}});
    return arr.dump();
}

ExtendedDiagram diagram_from_json(const std::string& text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed diagram JSON: ") + e.what());
    }
    if (!arr.is_array()) throw DataError("diagram JSON must be an array");
    ExtendedDiagram d;
    for (const auto& item : arr) {
        if (!item.is_object() || !item.contains("class") || !item.contains("birth") || !item.contains("death") ||
            !item["class"].is_string() || !item["birth"].is_number() || !item["death"].is_number()) {
            throw DataError("diagram entries need string 'class' and numeric 'birth'/'death': " + item.dump());
        }
        d.points.push_back({item["birth"].get<double>(), item["death"].get<double>(),
                            parse_point_class(item["class"].get<std::string>())});
    }
    std::sort(d.points.begin(), d.points.end(), point_less);
    return d;
}

}  // namespace dmapper
