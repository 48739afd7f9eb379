#include "run_config.hpp"

#include <filesystem>
#include <set>

#include "dmapper/error.hpp"
#include "dmapper/ingest.hpp"

namespace dmapper::cli {

namespace {

const std::set<std::string> kFormats{"points-csv", "xyz", "distance-csv", "fasta"};

bool matrix_format(const std::string& format) { return format == "distance-csv" || format == "fasta"; }

template <typename T>
void read_field(const Json& j, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type: " + j.at(key).dump());
    }
}

template <typename T>
void read_optional(const Json& j, const char* key, std::optional<T>& target) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        target.reset();
        return;
    }
    T value{};
    read_field(j, key, value);
    target = value;
}

}  // namespace

void RunConfig::resolve() {
    if (!kFormats.count(format)) throw ConfigError("format must be one of points-csv, xyz, distance-csv, fasta; got '" + format + "'");
    if (cluster_on != "scaled" && cluster_on != "raw") throw ConfigError("cluster_on must be 'scaled' or 'raw'");
    if (filter_on != "scaled" && filter_on != "raw") throw ConfigError("filter_on must be 'scaled' or 'raw'");
    if (mode == CoverMode::DMapper) {
        if (p) throw ConfigError("p is a classic-mode parameter; mode is dmapper (use alpha)");
        if (!alpha) alpha = 0.05;
    } else {
        if (alpha) throw ConfigError("alpha is a dmapper-mode parameter; mode is classic (use p)");
        if (!p) p = 0.1;
    }
    if (metric == "auto") metric = matrix_format(format) ? "precomputed" : "euclidean";
    parse_metric(metric);
    if (filter != "sum" && filter != "mean-distance" && filter.rfind("axis:", 0) != 0) {
        throw ConfigError("filter must be axis:<k>, sum or mean-distance; got '" + filter + "'");
    }
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (grid < 1) throw ConfigError("grid must be >= 1");
    pipeline().validate();
    bootstrap().validate();
}

PipelineParams RunConfig::pipeline() const {
    PipelineParams pp;
    pp.mode = mode;
    pp.n = n;
    if (alpha) pp.alpha = *alpha;
    if (p) pp.p = *p;
    pp.alpha_star = alpha_star;
    pp.dbscan.eps = eps;
    pp.dbscan.min_samples = min_samples;
    pp.dbscan.metric = metric == "precomputed" ? Metric::Precomputed : Metric::Euclidean;
    pp.em = em;
    pp.em.seed = seed;
    return pp;
}

BootstrapConfig RunConfig::bootstrap() const {
    BootstrapConfig bc;
    bc.replicates = replicates;
    bc.confidence = confidence;
    bc.seed = seed;
    bc.threads = threads;
    return bc;
}

Json to_json(const RunConfig& c) {
    Json em{{"max_iters", c.em.max_iters}, {"rel_tol", c.em.rel_tol}, {"n_init", c.em.n_init},
            {"init", to_string(c.em.init)}};
    em["variance_floor"] = c.em.variance_floor ? Json(*c.em.variance_floor) : Json(nullptr);
    Json j{{"input", c.input},
           {"format", c.format},
           {"header", c.header},
           {"kmer_k", c.kmer_k},
           {"scale", c.scale},
           {"cluster_on", c.cluster_on},
           {"filter_on", c.filter_on},
           {"filter", c.filter},
           {"mode", to_string(c.mode)},
           {"n", c.n},
           {"alpha_star", c.alpha_star},
           {"eps", c.eps},
           {"min_samples", c.min_samples},
           {"metric", c.metric},
           {"em", em},
           {"seed", c.seed},
           {"replicates", c.replicates},
           {"confidence", c.confidence},
           {"grid", c.grid}};
    if (c.alpha) j["alpha"] = *c.alpha;
    if (c.p) j["p"] = *c.p;
    return j;
}

RunConfig from_json(const Json& j, RunConfig c) {
    static const std::set<std::string> known{"input", "format", "header", "kmer_k", "scale", "cluster_on", "filter_on", "filter",
                                             "mode", "n", "alpha", "p", "alpha_star", "eps", "min_samples", "metric",
                                             "em", "seed", "replicates", "confidence", "grid", "threads"};
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
    }
    read_field(j, "input", c.input);
    read_field(j, "format", c.format);
    read_field(j, "header", c.header);
    read_field(j, "kmer_k", c.kmer_k);
    read_field(j, "scale", c.scale);
    read_field(j, "cluster_on", c.cluster_on);
    read_field(j, "filter_on", c.filter_on);
    read_field(j, "filter", c.filter);
    if (j.contains("mode")) {
        std::string mode;
        read_field(j, "mode", mode);
        c.mode = parse_cover_mode(mode);
    }
    read_field(j, "n", c.n);
    read_optional(j, "alpha", c.alpha);
    read_optional(j, "p", c.p);
    read_field(j, "alpha_star", c.alpha_star);
    read_field(j, "eps", c.eps);
    read_field(j, "min_samples", c.min_samples);
    read_field(j, "metric", c.metric);
    if (j.contains("em")) {
        const Json& em = j.at("em");
        if (!em.is_object()) throw ConfigError("config field 'em' must be an object");
        read_field(em, "max_iters", c.em.max_iters);
        read_field(em, "rel_tol", c.em.rel_tol);
        read_field(em, "n_init", c.em.n_init);
        read_optional(em, "variance_floor", c.em.variance_floor);
        if (em.contains("init")) {
            std::string init;
            read_field(em, "init", init);
            c.em.init = parse_em_init(init);
        }
    }
    read_field(j, "seed", c.seed);
    read_field(j, "replicates", c.replicates);
    read_field(j, "confidence", c.confidence);
    read_field(j, "grid", c.grid);
    read_field(j, "threads", c.threads);
    return c;
}

Inputs load_inputs(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("input path is required");
    if (!std::filesystem::exists(cfg.input)) throw ConfigError("input file '" + cfg.input + "' does not exist");

    if (!matrix_format(cfg.format)) {
        PointCloud pc = cfg.format == "xyz" ? load_xyz(cfg.input) : read_points_csv(cfg.input, cfg.header);
        FilterValues f = [&] {
            if (cfg.filter == "sum") return coordinate_sum(pc);
            if (cfg.filter == "mean-distance") throw ConfigError("filter mean-distance needs a distance-matrix input");
            std::size_t axis = 0;
            try {
                axis = std::stoul(cfg.filter.substr(5));
            } catch (const std::exception&) {
                throw ConfigError("bad axis in filter '" + cfg.filter + "'");
            }
            return project_axis(pc, axis);
        }();
        return {Dataset(std::move(pc)), std::move(f)};
    }

    DistanceMatrix raw = [&] {
        if (cfg.format == "distance-csv") return read_distance_csv(cfg.input, cfg.header);
        std::vector<KmerVector> vecs;
        for (const auto& rec : read_fasta(cfg.input)) vecs.push_back(kmer_freq(rec, cfg.kmer_k));
        return pairwise_distance(vecs);
    }();
    if (cfg.filter != "mean-distance") throw ConfigError("distance-matrix inputs support only the mean-distance filter");
    DistanceMatrix scaled = cfg.scale ? minmax_scale(raw) : raw;
    FilterValues f = mean_distance_filter(cfg.filter_on == "raw" ? raw : scaled);
    if (cfg.scale && cfg.cluster_on == "raw") return {Dataset(std::move(raw)), std::move(f)};
    return {Dataset(std::move(scaled)), std::move(f)};
}

}  // namespace dmapper::cli
