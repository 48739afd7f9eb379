#pragma once
// Quality metrics for Mapper graphs: overlap silhouette, bootstrap noise band
// on the extended diagram, topological signal rate, their weighted blend, and
// grid tuning of the cover parameter against that blend.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmapper/persistence.hpp"
#include "dmapper/pipeline.hpp"

namespace dmapper {

/// Mean silhouette over (point, node) memberships. A point in two nodes
/// contributes two samples; memberships of singleton nodes score 0.
double silhouette(const MapperGraph& graph, const Dataset& data);

struct BootstrapConfig {
    std::size_t replicates = 100;
    double confidence = 0.85;
    std::uint64_t seed = 0;
    std::size_t threads = 1;

    void validate() const;
};

struct BootstrapResult {
    double d_eps = 0.0;
    std::vector<std::optional<double>> distances;  // per replicate; empty when that replicate failed
    std::size_t failed = 0;
};

/// Resampled inputs (and refitted mixtures) per replicate. Independent of the
/// cover parameter, so one plan serves every point of a tuning grid.
struct BootstrapPlan {
    struct Replicate {
        std::vector<std::size_t> indices;
        std::optional<GaussianMixture1D> gmm;
        std::string error;  // non-empty when preparing the replicate failed
    };
    std::vector<Replicate> replicates;
};

BootstrapPlan prepare_bootstrap(const FilterValues& filter, const PipelineParams& params, const BootstrapConfig& cfg);

BootstrapResult run_bootstrap(const BootstrapPlan& plan, const Dataset& data, const FilterValues& filter,
                              const PipelineParams& params, const ExtendedDiagram& original,
                              const BootstrapConfig& cfg);

/// Resample, rerun the whole pipeline, and return the `confidence`
/// nearest-rank quantile of the bottleneck distances to `original`.
BootstrapResult bottleneck_bootstrap(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                                     const ExtendedDiagram& original, const BootstrapConfig& cfg);

/// Nearest-rank quantile: the ceil(q * n)-th smallest value.
double nearest_rank_quantile(std::vector<double> values, double q);

/// Fraction of diagram points whose half persistence exceeds d_eps.
double tsr(const ExtendedDiagram& diagram, double d_eps);

double sc_adj(double sc, double tsr, double w1 = 0.5, double w2 = 0.5);

struct EvalReport {
    double param = 0.0;
    double sc = 0.0;
    double sc_norm = 0.0;
    double tsr = 0.0;
    double sc_adj = 0.0;
    double d_eps = 0.0;
    ExtendedDiagram diagram;
    std::vector<std::optional<double>> replicate_distances;
    std::size_t failed_replicates = 0;
    GraphSummary summary;
    std::size_t uncovered = 0;
};

/// Metrics for a finished Mapper run.
EvalReport evaluate_result(const MapperResult& result, const Dataset& data, const FilterValues& filter,
                           const PipelineParams& params, const BootstrapPlan& plan, const BootstrapConfig& cfg);

/// Runs the pipeline, then evaluate_result with a fresh bootstrap plan.
EvalReport evaluate(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                    const BootstrapConfig& cfg);

struct GridPoint {
    double param = 0.0;
    std::optional<EvalReport> report;
    std::string error;
};

struct GridResult {
    CoverMode mode = CoverMode::Classic;
    double upper = 0.0;  // alpha' (DMapper) or 0.5 (Classic)
    std::size_t best_index = 0;
    double best_param = 0.0;
    std::vector<GridPoint> points;
};

/// Evaluates `grid_count` equally spaced parameters in (0, upper) and keeps
/// the largest SC_adj; ties go to the smaller parameter.
GridResult grid_tune(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                     std::size_t grid_count, const BootstrapConfig& cfg);

}  // namespace dmapper
