#include "dmapper/pipeline.hpp"

#include "dmapper/error.hpp"

namespace dmapper {

void PipelineParams::validate() const {
    if (n == 0) throw ConfigError("n must be >= 1");
    if (mode == CoverMode::DMapper && !(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (mode == CoverMode::Classic && !(p >= 0.0 && p < 1.0)) throw ConfigError("p must lie in [0, 1)");
    if (!(alpha_star > 0.0 && alpha_star < 1.0)) throw ConfigError("alpha_star must lie in (0, 1)");
    dbscan.validate();
    em.validate();
}

Cover build_cover(const FilterValues& filter, const PipelineParams& params, const GaussianMixture1D* gmm) {
    params.validate();
    if (params.mode == CoverMode::Classic) return uniform_cover(filter, params.n, params.p);
    if (gmm) {
        if (gmm->n_components() != params.n) throw ConfigError("supplied mixture has the wrong number of components");
        return quantile_cover(*gmm, params.alpha);
    }
    return quantile_cover(fit_gmm(filter.values(), params.n, params.em), params.alpha);
}

MapperResult run_mapper_with_cover(const Dataset& data, const FilterValues& filter, const Cover& cover,
                                   const DbscanParams& dbscan) {
    if (data.size() != filter.size()) throw DataError("filter values and data have different lengths");
    MapperResult out;
    out.cover = cover;
    const auto preimages = pullback(cover, filter);
    out.graph = build_nerve(
        preimages, [&](const IndexSet& subset) { return dmapper::dbscan(data, subset, dbscan); }, filter);
    out.uncovered = coverage_check(cover, filter);
    return out;
}

MapperResult run_mapper(const Dataset& data, const FilterValues& filter, const PipelineParams& params) {
    params.validate();
    if (params.mode == CoverMode::DMapper) {
        return run_mapper(data, filter, params, fit_gmm(filter.values(), params.n, params.em));
    }
    return run_mapper_with_cover(data, filter, uniform_cover(filter, params.n, params.p), params.dbscan);
}

MapperResult run_mapper(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                        const GaussianMixture1D& gmm) {
    MapperResult out = run_mapper_with_cover(data, filter, build_cover(filter, params, &gmm), params.dbscan);
    if (params.mode == CoverMode::DMapper) out.gmm = gmm;
    return out;
}

}  // namespace dmapper
