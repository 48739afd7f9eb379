#pragma once
// Extended persistence of vertex-valued graphs, and the bottleneck distance
// between extended diagrams.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dmapper/mapper_graph.hpp"

namespace dmapper {

enum class PointClass { Ord0 = 0, Rel1 = 1, Ext0 = 2, Ext1 = 3 };

inline constexpr PointClass kAllClasses[] = {PointClass::Ord0, PointClass::Rel1, PointClass::Ext0, PointClass::Ext1};

std::string to_string(PointClass c);
PointClass parse_point_class(const std::string& text);

struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    PointClass cls = PointClass::Ord0;

    /// L-infinity distance to the diagonal.
    double half_persistence() const;
    bool operator==(const DiagramPoint&) const = default;
};

struct ExtendedDiagram {
    std::vector<DiagramPoint> points;  // sorted by (class, birth, death)

    std::size_t count(PointClass c) const;
    std::vector<DiagramPoint> of_class(PointClass c) const;
    bool operator==(const ExtendedDiagram&) const = default;
};

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

/// Ascending pass: vertices by increasing value, each edge at the larger of
/// its endpoint values. Descending pass over a cone apex: cone edges by
/// decreasing value, each cone triangle at the smaller endpoint value.
/// Equal values are ordered by vertex id. Pairs with birth == death are
/// dropped unless `keep_zero_persistence`.
ExtendedDiagram extended_diagram(std::size_t n_vertices, const EdgeList& edges, std::span<const double> values,
                                 bool keep_zero_persistence = false);
ExtendedDiagram extended_diagram(const MapperGraph& graph, std::span<const double> values,
                                 bool keep_zero_persistence = false);

/// Bottleneck distance between two point sets (one class), L-infinity ground
/// metric, points may be matched to the diagonal at their half persistence.
double bottleneck_points(std::span<const DiagramPoint> a, std::span<const DiagramPoint> b);

/// Max over classes of the per-class bottleneck distance.
double bottleneck(const ExtendedDiagram& a, const ExtendedDiagram& b);

std::string diagram_to_json(const ExtendedDiagram& d);
ExtendedDiagram diagram_from_json(const std::string& text);

}  // namespace dmapper
