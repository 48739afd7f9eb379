// dmapper command-line tool: run / eval / tune / diagram / gen / kmer.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dmapper/error.hpp"
#include "dmapper/ingest.hpp"
#include "run_config.hpp"

using namespace dmapper;
using cli::RunConfig;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json(const std::string& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw DataError("malformed JSON in '" + path + "': " + e.what());
    }
}

// Empty path means stdout.
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::string fmt12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Flags that mirror RunConfig; only flags given on the command line override
// the --config file.
struct ConfigFlags {
    std::string config_path;
    std::optional<std::string> input, format, cluster_on, filter_on, filter, mode, metric, em_init;
    std::optional<bool> header, scale;
    std::optional<std::size_t> kmer_k, n, min_samples, replicates, threads, grid;
    std::optional<double> alpha, p, alpha_star, eps, confidence, em_tol, em_floor;
    std::optional<int> em_max_iters, em_n_init;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App& app, bool with_grid) {
        app.add_option("--config", config_path, "JSON config; flags override its fields");
        app.add_option("-i,--input", input, "input data file");
        app.add_option("--format", format, "points-csv | xyz | distance-csv | fasta");
        app.add_flag("--header", header, "skip the first line of a CSV input");
        app.add_option("--kmer-k", kmer_k, "k-mer length for fasta input");
        app.add_flag("--scale", scale, "min-max scale the distance matrix");
        app.add_option("--cluster-on", cluster_on, "scaled | raw distance matrix for DBSCAN");
        app.add_option("--filter-on", filter_on, "scaled | raw distance matrix for the mean-distance filter");
        app.add_option("--filter", filter, "axis:<k> | sum | mean-distance");
        app.add_option("--mode", mode, "classic | dmapper");
        app.add_option("-n,--intervals", n, "number of cover intervals");
        app.add_option("--alpha", alpha, "quantile level (dmapper)");
        app.add_option("--p", p, "overlap ratio (classic)");
        app.add_option("--alpha-star", alpha_star, "pairs below this level may stay disjoint");
        app.add_option("--eps", eps, "DBSCAN radius");
        app.add_option("--min-samples", min_samples, "DBSCAN core threshold");
        app.add_option("--metric", metric, "auto | euclidean | precomputed");
        app.add_option("--em-init", em_init, "quantile | kmeans");
        app.add_option("--em-tol", em_tol, "EM relative log-likelihood tolerance");
        app.add_option("--em-max-iters", em_max_iters, "EM iteration cap");
        app.add_option("--em-n-init", em_n_init, "EM restarts");
        app.add_option("--em-variance-floor", em_floor, "EM variance floor");
        app.add_option("--seed", seed, "random seed");
        app.add_option("--replicates", replicates, "bootstrap replicates");
        app.add_option("--confidence", confidence, "bootstrap confidence level");
        app.add_option("--threads", threads, "worker threads");
        if (with_grid) app.add_option("--grid", grid, "number of grid points");
    }

    RunConfig resolve(RunConfig base) const {
        if (!config_path.empty()) base = cli::from_json(read_json(config_path), base);
        auto set = [](auto& target, const auto& flag) {
            if (flag) target = *flag;
        };
        set(base.input, input);
        set(base.format, format);
        set(base.header, header);
        set(base.kmer_k, kmer_k);
        set(base.scale, scale);
        set(base.cluster_on, cluster_on);
        set(base.filter_on, filter_on);
        set(base.filter, filter);
        if (mode) {
            const CoverMode m = parse_cover_mode(*mode);
            // switching mode through a flag drops the other mode's parameter from the file
            if (m != base.mode) {
                base.alpha.reset();
                base.p.reset();
            }
            base.mode = m;
        }
        set(base.n, n);
        if (alpha) base.alpha = *alpha;
        if (p) base.p = *p;
        set(base.alpha_star, alpha_star);
        set(base.eps, eps);
        set(base.min_samples, min_samples);
        set(base.metric, metric);
        if (em_init) base.em.init = parse_em_init(*em_init);
        set(base.em.rel_tol, em_tol);
        set(base.em.max_iters, em_max_iters);
        set(base.em.n_init, em_n_init);
        if (em_floor) base.em.variance_floor = *em_floor;
        set(base.seed, seed);
        set(base.replicates, replicates);
        set(base.confidence, confidence);
        set(base.threads, threads);
        set(base.grid, grid);
        base.resolve();
        return base;
    }
};

std::vector<double> mean_values(const MapperGraph& g) {
    std::vector<double> v;
    for (const auto& node : g.nodes) v.push_back(node.mean_filter);
    return v;
}

void warn_uncovered(const MapperResult& res, bool strict) {
    if (res.uncovered.empty()) return;
    const std::string msg = std::to_string(res.uncovered.size()) + " points lie in no cover interval";
    if (strict) throw DataError(msg + " (--strict-cover)");
    std::cerr << "warning: " << msg << "\n";
}

int run_command(const RunConfig& cfg, const std::string& out, const std::string& dot, const std::string& cover_out,
                bool strict) {
    const auto in = cli::load_inputs(cfg);
    const MapperResult res = run_mapper(in.data, in.filter, cfg.pipeline());
    warn_uncovered(res, strict);
    emit(out, canonical_dump(graph_to_json(res.graph, cli::to_json(cfg))));
    if (!dot.empty()) emit(dot, graph_to_dot(res.graph));
    if (!cover_out.empty()) {
        Json j = cover_to_json(res.cover);
        if (res.gmm) j["gmm"] = gmm_to_json(*res.gmm);
        j["uncovered"] = res.uncovered.size();
        emit(cover_out, canonical_dump(j));
    }
    return 0;
}

int eval_command(const RunConfig& cfg, const std::string& out, bool with_replicates, bool strict) {
    const auto in = cli::load_inputs(cfg);
    const PipelineParams pp = cfg.pipeline();
    const MapperResult res = run_mapper(in.data, in.filter, pp);
    warn_uncovered(res, strict);
    const BootstrapConfig bc = cfg.bootstrap();
    const EvalReport rep = evaluate_result(res, in.data, in.filter, pp, prepare_bootstrap(in.filter, pp, bc), bc);
    Json j = report_to_json(rep, with_replicates);
    j["params"] = cli::to_json(cfg);
    emit(out, canonical_dump(j));
    return 0;
}

int tune_command(const RunConfig& cfg, const std::string& out, const std::string& csv) {
    const auto in = cli::load_inputs(cfg);
    const GridResult gr = grid_tune(in.data, in.filter, cfg.pipeline(), cfg.grid, cfg.bootstrap());
    RunConfig best = cfg;
    (best.mode == CoverMode::DMapper ? best.alpha : best.p) = gr.best_param;
    Json j{{"mode", to_string(gr.mode)},
           {"upper", gr.upper},
           {"best_index", gr.best_index},
           {"best_param", gr.best_param},
           {"best", report_to_json(*gr.points[gr.best_index].report, false)},
           {"params", cli::to_json(best)}};
    emit(out, canonical_dump(j));
    if (!csv.empty()) {
        std::ostringstream s;
        s << "index," << (gr.mode == CoverMode::DMapper ? "alpha" : "p")
          << ",sc,sc_norm,tsr,sc_adj,d_eps,components,cycle_rank,nodes,edges,failed_replicates,error\n";
        for (std::size_t k = 0; k < gr.points.size(); ++k) {
            const auto& gp = gr.points[k];
            s << k << ',' << fmt12(gp.param);
            if (gp.report) {
                const auto& r = *gp.report;
                s << ',' << fmt12(r.sc) << ',' << fmt12(r.sc_norm) << ',' << fmt12(r.tsr) << ',' << fmt12(r.sc_adj)
                  << ',' << fmt12(r.d_eps) << ',' << r.summary.components << ',' << r.summary.cycle_rank << ','
                  << r.summary.node_count << ',' << r.summary.edge_count << ',' << r.failed_replicates << ",\n";
            } else {
                std::string err = gp.error;
                for (char& c : err) {
                    if (c == ',' || c == '\n') c = ';';
                }
                s << ",,,,,,,,,,," << err << "\n";
            }
        }
        emit(csv, s.str());
    }
    return 0;
}

ExtendedDiagram diagram_of(const std::string& path, bool keep_zero) {
    const Json j = read_json(path);
    if (j.is_array()) return diagram_from_json(j.dump());
    const MapperGraph g = graph_from_json(j);
    return extended_diagram(g, mean_values(g), keep_zero);
}

int main_impl(int argc, char** argv) {
    CLI::App app{"Mapper and D-Mapper graphs with persistence-based evaluation"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "build a Mapper graph");
    ConfigFlags run_flags;
    run_flags.attach(*run, false);
    std::string run_out, run_dot, run_cover, run_emit;
    bool run_strict = false;
    run->add_option("-o,--out", run_out, "graph JSON path (stdout when omitted)");
    run->add_option("--dot", run_dot, "Graphviz output path");
    run->add_option("--emit-cover", run_cover, "cover JSON path");
    run->add_option("--emit-config", run_emit, "write the resolved config here");
    run->add_flag("--strict-cover", run_strict, "fail when some point lies in no interval");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a Mapper configuration (SC, TSR, SC_adj)");
    ConfigFlags eval_flags;
    eval_flags.attach(*eval, false);
    std::string eval_graph, eval_out, eval_emit;
    bool eval_reps = false, eval_strict = false;
    eval->add_option("--graph", eval_graph, "graph JSON whose embedded params define the run");
    eval->add_option("-o,--out", eval_out, "report JSON path");
    eval->add_option("--emit-config", eval_emit, "write the resolved config here");
    eval->add_flag("--replicate-distances", eval_reps, "include per-replicate bottleneck distances");
    eval->add_flag("--strict-cover", eval_strict, "fail when some point lies in no interval");

    // tune
    auto* tune = app.add_subcommand("tune", "grid search over alpha (dmapper) or p (classic)");
    ConfigFlags tune_flags;
    tune_flags.attach(*tune, true);
    std::string tune_out, tune_csv, tune_emit;
    tune->add_option("-o,--out", tune_out, "best-parameter report JSON path");
    tune->add_option("--csv", tune_csv, "per-grid CSV path");
    tune->add_option("--emit-config", tune_emit, "write the resolved config here");

    // diagram
    auto* diag = app.add_subcommand("diagram", "extended persistence diagram of a graph");
    std::string diag_graph, diag_out, diag_compare;
    bool diag_keep = false;
    diag->add_option("--graph", diag_graph, "graph JSON")->required();
    diag->add_option("-o,--out", diag_out, "diagram JSON path");
    diag->add_option("--compare", diag_compare, "graph or diagram JSON; prints the bottleneck distance");
    diag->add_flag("--keep-zero", diag_keep, "retain zero-persistence points");

    // gen
    auto* gen = app.add_subcommand("gen", "synthetic datasets");
    std::string gen_kind, gen_out;
    std::size_t gen_count = 5000, gen_records = 20, gen_length = 3000, gen_lineages = 3;
    double gen_radius = 1.0, gen_cx = 0.0, gen_cy = 0.0, gen_rate = 0.01;
    std::uint64_t gen_seed = 0;
    gen->add_option("kind", gen_kind, "disjoint-circles | intersecting-circles | circle | fasta")
        ->required()
        ->check(CLI::IsMember({"disjoint-circles", "intersecting-circles", "circle", "fasta"}));
    gen->add_option("-o,--out", gen_out, "output path");
    gen->add_option("--count", gen_count, "points per circle");
    gen->add_option("--radius", gen_radius, "circle radius");
    gen->add_option("--cx", gen_cx, "circle centre x");
    gen->add_option("--cy", gen_cy, "circle centre y");
    gen->add_option("--records", gen_records, "fasta records");
    gen->add_option("--length", gen_length, "fasta sequence length");
    gen->add_option("--lineages", gen_lineages, "fasta ancestor count");
    gen->add_option("--mutation-rate", gen_rate, "fasta per-base mutation rate");
    gen->add_option("--seed", gen_seed, "random seed");

    // kmer
    auto* kmer = app.add_subcommand("kmer", "k-mer distance matrix from FASTA");
    std::string kmer_in, kmer_out;
    std::size_t kmer_k = 3;
    bool kmer_scale = false;
    kmer->add_option("-i,--input", kmer_in, "FASTA file")->required();
    kmer->add_option("-k", kmer_k, "k-mer length");
    kmer->add_flag("--scale", kmer_scale, "min-max scale the matrix");
    kmer->add_option("-o,--out", kmer_out, "distance CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*run) {
        const RunConfig cfg = run_flags.resolve({});
        if (!run_emit.empty()) emit(run_emit, canonical_dump(cli::to_json(cfg)));
        return run_command(cfg, run_out, run_dot, run_cover, run_strict);
    }
    if (*eval) {
        RunConfig base;
        if (!eval_graph.empty()) {
            const Json g = read_json(eval_graph);
            if (!g.contains("params")) throw DataError("graph JSON has no params record");
            base = cli::from_json(g.at("params"));
        }
        const RunConfig cfg = eval_flags.resolve(base);
        if (!eval_emit.empty()) emit(eval_emit, canonical_dump(cli::to_json(cfg)));
        return eval_command(cfg, eval_out, eval_reps, eval_strict);
    }
    if (*tune) {
        const RunConfig cfg = tune_flags.resolve({});
        if (!tune_emit.empty()) emit(tune_emit, canonical_dump(cli::to_json(cfg)));
        return tune_command(cfg, tune_out, tune_csv);
    }
    if (*diag) {
        const ExtendedDiagram d = diagram_of(diag_graph, diag_keep);
        if (!diag_compare.empty()) {
            const ExtendedDiagram other = diagram_of(diag_compare, diag_keep);
            emit(diag_out, canonical_dump(Json{{"bottleneck", bottleneck(d, other)}}));
        } else {
            emit(diag_out, canonical_dump(diagram_json(d)));
        }
        return 0;
    }
    if (*gen) {
        if (gen_kind == "fasta") {
            const auto recs = gen_synthetic_fasta(gen_records, gen_length, gen_lineages, gen_rate, gen_seed);
            if (gen_out.empty()) throw ConfigError("gen fasta needs --out");
            write_fasta(gen_out, recs);
            return 0;
        }
        PointCloud pc = gen_kind == "circle"
                            ? gen_circle({gen_cx, gen_cy}, gen_radius, gen_count, gen_seed)
                            : gen_two_circles({0.0, 0.0}, {gen_kind == "disjoint-circles" ? 3.0 : 1.5, 0.0}, gen_radius,
                                              gen_count, gen_seed);
        if (gen_out.empty()) throw ConfigError("gen needs --out");
        write_points_csv(gen_out, pc);
        return 0;
    }
    if (*kmer) {
        std::vector<KmerVector> vecs;
        for (const auto& rec : read_fasta(kmer_in)) vecs.push_back(kmer_freq(rec, kmer_k));
        DistanceMatrix dm = pairwise_distance(vecs);
        if (kmer_scale) dm = minmax_scale(dm);
        if (kmer_out.empty()) throw ConfigError("kmer needs --out");
        write_distance_csv(kmer_out, dm);
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return main_impl(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
