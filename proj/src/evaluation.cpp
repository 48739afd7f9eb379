#include "dmapper/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dmapper/error.hpp"
#include "dmapper/random.hpp"
#include "parallel.hpp"

namespace dmapper {

double silhouette(const MapperGraph& graph, const Dataset& data) {
    const std::size_t k_nodes = graph.nodes.size();
    if (k_nodes < 2) throw DataError("silhouette needs at least two nodes");

    // compact index over covered points
    std::vector<std::size_t> local(data.size(), std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> covered;
    std::vector<std::vector<std::size_t>> owners;
    for (const auto& node : graph.nodes) {
        for (std::size_t p : node.members) {
            if (p >= data.size()) throw DataError("graph member index outside the dataset");
            if (local[p] == std::numeric_limits<std::size_t>::max()) {
                local[p] = covered.size();
                covered.push_back(p);
                owners.emplace_back();
            }
            owners[local[p]].push_back(node.id);
        }
    }
    const std::size_t m = covered.size();
    // sums[x * k_nodes + k] = sum of d(x, y) over members y of node k
    std::vector<double> sums(m * k_nodes, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
        double* sx = sums.data() + x * k_nodes;
        for (std::size_t y = x + 1; y < m; ++y) {
            const double d = data.distance(covered[x], covered[y]);
            double* sy = sums.data() + y * k_nodes;
            for (std::size_t k : owners[y]) sx[k] += d;
            for (std::size_t k : owners[x]) sy[k] += d;
        }
    }
    double total = 0.0;
    std::size_t samples = 0;
    for (std::size_t x = 0; x < m; ++x) {
        const double* sx = sums.data() + x * k_nodes;
        for (std::size_t i : owners[x]) {
            ++samples;
            const std::size_t size_i = graph.nodes[i].members.size();
            if (size_i == 1) continue;
            const double a = sx[i] / static_cast<double>(size_i - 1);
            double b = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < k_nodes; ++j) {
                if (j == i) continue;
                b = std::min(b, sx[j] / static_cast<double>(graph.nodes[j].members.size()));
            }
            const double denom = std::max(a, b);
            if (denom > 0.0) total += (b - a) / denom;
        }
    }
    return total / static_cast<double>(samples);
}

void BootstrapConfig::validate() const {
    if (replicates < 1) throw ConfigError("bootstrap.replicates must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("bootstrap.confidence must lie in (0, 1)");
}

double nearest_rank_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw NumericError("quantile of an empty sample");
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("quantile level must lie in (0, 1]");
    std::sort(values.begin(), values.end());
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size()) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

BootstrapPlan prepare_bootstrap(const FilterValues& filter, const PipelineParams& params, const BootstrapConfig& cfg) {
    cfg.validate();
    params.validate();
    const std::size_t n = filter.size();
    if (n == 0) throw DataError("cannot bootstrap an empty dataset");
    BootstrapPlan plan;
    plan.replicates.resize(cfg.replicates);
    detail::parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
        auto& rep = plan.replicates[r];
        std::mt19937_64 rng(derive_seed(cfg.seed, r));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        rep.indices.resize(n);
        for (auto& i : rep.indices) i = pick(rng);
        if (params.mode != CoverMode::DMapper) return;
        try {
            const FilterValues sample = filter.select(rep.indices);
            rep.gmm = fit_gmm(sample.values(), params.n, params.em);
        } catch (const Error& e) {
            rep.error = e.what();
        }
    });
    return plan;
}

BootstrapResult run_bootstrap(const BootstrapPlan& plan, const Dataset& data, const FilterValues& filter,
                              const PipelineParams& params, const ExtendedDiagram& original,
                              const BootstrapConfig& cfg) {
    cfg.validate();
    const std::size_t reps = plan.replicates.size();
    BootstrapResult out;
    out.distances.resize(reps);
    detail::parallel_for(reps, cfg.threads, [&](std::size_t r) {
        const auto& rep = plan.replicates[r];
        if (!rep.error.empty()) return;
        try {
            const Dataset sample = data.select(rep.indices);
            const FilterValues fv = filter.select(rep.indices);
            const MapperResult res = rep.gmm ? run_mapper(sample, fv, params, *rep.gmm) : run_mapper(sample, fv, params);
            if (res.graph.nodes.empty()) return;
            std::vector<double> values;
            for (const auto& node : res.graph.nodes) values.push_back(node.mean_filter);
            out.distances[r] = bottleneck(original, extended_diagram(res.graph, values));
        } catch (const Error&) {
            // counted as failed below
        }
    });
    std::vector<double> ok;
    for (const auto& d : out.distances) {
        if (d) {
            ok.push_back(*d);
        } else {
            ++out.failed;
        }
    }
    if (static_cast<double>(out.failed) > 0.2 * static_cast<double>(reps)) {
        throw NumericError(std::to_string(out.failed) + " of " + std::to_string(reps) +
                           " bootstrap replicates failed (limit 20%)");
    }
    out.d_eps = nearest_rank_quantile(std::move(ok), cfg.confidence);
    return out;
}

BootstrapResult bottleneck_bootstrap(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                                     const ExtendedDiagram& original, const BootstrapConfig& cfg) {
    return run_bootstrap(prepare_bootstrap(filter, params, cfg), data, filter, params, original, cfg);
}

double tsr(const ExtendedDiagram& diagram, double d_eps) {
    if (diagram.points.empty()) throw NumericError("TSR is undefined for an empty diagram");
    const auto signal = std::count_if(diagram.points.begin(), diagram.points.end(),
                                      [&](const DiagramPoint& p) { return p.half_persistence() > d_eps; });
    return static_cast<double>(signal) / static_cast<double>(diagram.points.size());
}

double sc_adj(double sc, double tsr_value, double w1, double w2) {
    if (!(w1 >= 0.0 && w2 >= 0.0) || std::abs(w1 + w2 - 1.0) > 1e-12) {
        throw ConfigError("SC_adj weights must be non-negative and sum to 1");
    }
    return w1 * (sc + 1.0) / 2.0 + w2 * tsr_value;
}

EvalReport evaluate_result(const MapperResult& result, const Dataset& data, const FilterValues& filter,
                           const PipelineParams& params, const BootstrapPlan& plan, const BootstrapConfig& cfg) {
    EvalReport rep;
    rep.param = params.mode == CoverMode::DMapper ? params.alpha : params.p;
    rep.summary = graph_summary(result.graph);
    rep.uncovered = result.uncovered.size();
    rep.sc = silhouette(result.graph, data);
    rep.sc_norm = (rep.sc + 1.0) / 2.0;
    std::vector<double> values;
    for (const auto& node : result.graph.nodes) values.push_back(node.mean_filter);
    rep.diagram = extended_diagram(result.graph, values);
    const BootstrapResult boot = run_bootstrap(plan, data, filter, params, rep.diagram, cfg);
    rep.d_eps = boot.d_eps;
    rep.replicate_distances = boot.distances;
    rep.failed_replicates = boot.failed;
    rep.tsr = tsr(rep.diagram, rep.d_eps);
    rep.sc_adj = sc_adj(rep.sc, rep.tsr);
    return rep;
}

EvalReport evaluate(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                    const BootstrapConfig& cfg) {
    const MapperResult result = run_mapper(data, filter, params);
    return evaluate_result(result, data, filter, params, prepare_bootstrap(filter, params, cfg), cfg);
}

GridResult grid_tune(const Dataset& data, const FilterValues& filter, const PipelineParams& params,
                     std::size_t grid_count, const BootstrapConfig& cfg) {
    if (grid_count < 1) throw ConfigError("grid_count must be >= 1");
    cfg.validate();
    GridResult out;
    out.mode = params.mode;
    std::optional<GaussianMixture1D> gmm;
    if (params.mode == CoverMode::DMapper) {
        gmm = fit_gmm(filter.values(), params.n, params.em);
        out.upper = params.n >= 2 ? alpha_upper_bound(*gmm, params.alpha_star) : 1.0;
    } else {
        out.upper = 0.5;
    }
    out.points.resize(grid_count);
    for (std::size_t k = 0; k < grid_count; ++k) {
        out.points[k].param = static_cast<double>(k + 1) * out.upper / static_cast<double>(grid_count + 1);
    }

    const BootstrapPlan plan = prepare_bootstrap(filter, params, cfg);
    BootstrapConfig inner = cfg;
    inner.threads = 1;
    detail::parallel_for(grid_count, cfg.threads, [&](std::size_t k) {
        GridPoint& gp = out.points[k];
        PipelineParams pp = params;
        (pp.mode == CoverMode::DMapper ? pp.alpha : pp.p) = gp.param;
        try {
            const MapperResult res = gmm ? run_mapper(data, filter, pp, *gmm) : run_mapper(data, filter, pp);
            gp.report = evaluate_result(res, data, filter, pp, plan, inner);
        } catch (const Error& e) {
            gp.error = e.what();
        }
    });

    bool found = false;
    for (std::size_t k = 0; k < grid_count; ++k) {
        const auto& r = out.points[k].report;
        if (!r) continue;
        if (!found || r->sc_adj > out.points[out.best_index].report->sc_adj) {
            out.best_index = k;
            found = true;
        }
    }
    if (!found) throw NumericError("every grid point failed: " + out.points.front().error);
    out.best_param = out.points[out.best_index].param;
    return out;
}

}  // namespace dmapper
