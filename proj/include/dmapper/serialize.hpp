#pragma once
// JSON and DOT encodings of pipeline artifacts.

#include <string>

#include "json.hpp"

#include "dmapper/cover.hpp"
#include "dmapper/evaluation.hpp"
#include "dmapper/mapper_graph.hpp"
#include "dmapper/mixture.hpp"
#include "dmapper/persistence.hpp"

namespace dmapper {

using Json = nlohmann::json;

/// {"nodes":[{"id","interval","members","mean_filter","size"}],"edges":[[u,v]],"params":{...},"dropped_noise":k}
Json graph_to_json(const MapperGraph& graph, const Json& params = Json::object());
MapperGraph graph_from_json(const Json& j);

Json cover_to_json(const Cover& cover);
Json gmm_to_json(const GaussianMixture1D& gmm);
Json diagram_json(const ExtendedDiagram& d);
Json summary_to_json(const GraphSummary& s);
Json report_to_json(const EvalReport& report, bool with_replicates);

/// Rounds every floating-point value to 12 significant digits and dumps with
/// sorted keys, so equal inputs give equal bytes.
std::string canonical_dump(const Json& j, int indent = 2);

/// Graphviz export. Fill colour runs linearly from blue (#0000ff) at the
/// smallest mean filter value to red (#ff0000) at the largest.
std::string graph_to_dot(const MapperGraph& graph);

}  // namespace dmapper
