#pragma once
// End-to-end Mapper: filter values -> cover -> preimages -> clusters -> nerve.

#include <cstddef>
#include <optional>
#include <vector>

#include "dmapper/core_data.hpp"
#include "dmapper/cover.hpp"
#include "dmapper/mapper_graph.hpp"
#include "dmapper/mixture.hpp"

namespace dmapper {

struct PipelineParams {
    CoverMode mode = CoverMode::DMapper;
    std::size_t n = 10;
    double alpha = 0.05;       // DMapper only
    double p = 0.1;            // Classic only
    double alpha_star = 0.005;
    DbscanParams dbscan;
    EmConfig em;

    void validate() const;
};

struct MapperResult {
    Cover cover;
    std::optional<GaussianMixture1D> gmm;  // DMapper only
    MapperGraph graph;
    std::vector<std::size_t> uncovered;
};

/// Builds the cover the parameters ask for; DMapper fits a mixture unless one is supplied.
Cover build_cover(const FilterValues& filter, const PipelineParams& params,
                  const GaussianMixture1D* gmm = nullptr);

MapperResult run_mapper(const Dataset& data, const FilterValues& filter, const PipelineParams& params);

/// DMapper with a mixture that was already fitted to `filter`.
MapperResult run_mapper(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                        const GaussianMixture1D& gmm);

/// Mapper over an explicit cover.
MapperResult run_mapper_with_cover(const Dataset& data, const FilterValues& filter, const Cover& cover,
                                   const DbscanParams& dbscan);

}  // namespace dmapper
