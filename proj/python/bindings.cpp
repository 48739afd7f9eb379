// Python module _core. Composite results cross the boundary as JSON text and
// are decoded on the Python side.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dmapper/cover.hpp"
#include "dmapper/error.hpp"
#include "dmapper/evaluation.hpp"
#include "dmapper/ingest.hpp"
#include "dmapper/mixture.hpp"
#include "dmapper/persistence.hpp"
#include "dmapper/serialize.hpp"

namespace py = pybind11;
using namespace dmapper;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Dataset to_dataset(const Array& a, bool precomputed) {
    if (a.ndim() == 1 && !precomputed) {
        return Dataset(PointCloud(a.shape(0), 1, std::vector<double>(a.data(), a.data() + a.size())));
    }
    if (a.ndim() != 2) throw DataError("data must be a 2-d array");
    std::vector<double> v(a.data(), a.data() + a.size());
    if (precomputed) {
        if (a.shape(0) != a.shape(1)) throw DataError("distance matrix must be square");
        return Dataset(DistanceMatrix(a.shape(0), std::move(v)));
    }
    return Dataset(PointCloud(a.shape(0), a.shape(1), std::move(v)));
}

FilterValues to_filter(const Array& a) {
    if (a.ndim() != 1) throw DataError("filter values must be a 1-d array");
    return FilterValues(std::vector<double>(a.data(), a.data() + a.size()));
}

EmConfig em_config(const std::string& init, int n_init, double rel_tol, int max_iters, std::uint64_t seed) {
    EmConfig em;
    em.init = parse_em_init(init);
    em.n_init = n_init;
    em.rel_tol = rel_tol;
    em.max_iters = max_iters;
    em.seed = seed;
    return em;
}

PipelineParams params_from(const std::string& mode, std::size_t n, std::optional<double> alpha, std::optional<double> p,
                           double eps, std::size_t min_samples, bool precomputed, const EmConfig& em) {
    PipelineParams pp;
    pp.mode = parse_cover_mode(mode);
    pp.n = n;
    if (pp.mode == CoverMode::DMapper && p) throw ConfigError("p is a classic-mode parameter");
    if (pp.mode == CoverMode::Classic && alpha) throw ConfigError("alpha is a dmapper-mode parameter");
    if (alpha) pp.alpha = *alpha;
    if (p) pp.p = *p;
    pp.dbscan.eps = eps;
    pp.dbscan.min_samples = min_samples;
    pp.dbscan.metric = precomputed ? Metric::Precomputed : Metric::Euclidean;
    pp.em = em;
    return pp;
}

ExtendedDiagram diagram_from_tuples(const std::vector<std::tuple<std::string, double, double>>& pts) {
    ExtendedDiagram d;
    for (const auto& [cls, b, e] : pts) d.points.push_back({b, e, parse_point_class(cls)});
    return d;
}

std::vector<std::tuple<std::string, double, double>> diagram_tuples(const ExtendedDiagram& d) {
    std::vector<std::tuple<std::string, double, double>> out;
    for (const auto& p : d.points) out.emplace_back(to_string(p.cls), p.birth, p.death);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mapper graphs with mixture-model covers";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def(
        "fit_gmm",
        [](const Array& values, std::size_t n, const std::string& init, int n_init, double rel_tol, int max_iters,
           std::uint64_t seed) {
            const auto f = to_filter(values);
            return gmm_to_json(fit_gmm(f.values(), n, em_config(init, n_init, rel_tol, max_iters, seed))).dump();
        },
        py::arg("values"), py::arg("n"), py::arg("init") = "quantile", py::arg("n_init") = 5, py::arg("rel_tol") = 1e-8,
        py::arg("max_iters") = 500, py::arg("seed") = 0);

    m.def(
        "alpha_upper_bound",
        [](std::vector<double> w, std::vector<double> mu, std::vector<double> sd, double alpha_star) {
            return alpha_upper_bound(GaussianMixture1D(std::move(w), std::move(mu), std::move(sd)), alpha_star);
        },
        py::arg("weights"), py::arg("means"), py::arg("stddevs"), py::arg("alpha_star") = 0.005);

    m.def(
        "quantile_cover",
        [](std::vector<double> w, std::vector<double> mu, std::vector<double> sd, double alpha) {
            std::vector<std::pair<double, double>> out;
            for (const auto& iv : quantile_cover(GaussianMixture1D(std::move(w), std::move(mu), std::move(sd)), alpha).intervals) {
                out.emplace_back(iv.start, iv.end);
            }
            return out;
        },
        py::arg("weights"), py::arg("means"), py::arg("stddevs"), py::arg("alpha"));

    m.def(
        "run_mapper",
        [](const Array& data, const Array& filter, const std::string& mode, std::size_t n, std::optional<double> alpha,
           std::optional<double> p, double eps, std::size_t min_samples, bool precomputed, const std::string& em_init,
           std::uint64_t seed) {
            const Dataset d = to_dataset(data, precomputed);
            const FilterValues f = to_filter(filter);
            const auto pp = params_from(mode, n, alpha, p, eps, min_samples, precomputed,
                                        em_config(em_init, 5, 1e-8, 500, seed));
            py::gil_scoped_release release;
            const MapperResult r = run_mapper(d, f, pp);
            Json j = graph_to_json(r.graph);
            j["cover"] = cover_to_json(r.cover);
            j["uncovered"] = r.uncovered;
            return j.dump();
        },
        py::arg("data"), py::arg("filter"), py::arg("mode") = "dmapper", py::arg("n") = 10,
        py::arg("alpha") = py::none(), py::arg("p") = py::none(), py::arg("eps") = 0.5, py::arg("min_samples") = 3,
        py::arg("precomputed") = false, py::arg("em_init") = "quantile", py::arg("seed") = 0);

    m.def(
        "evaluate",
        [](const Array& data, const Array& filter, const std::string& mode, std::size_t n, std::optional<double> alpha,
           std::optional<double> p, double eps, std::size_t min_samples, bool precomputed, const std::string& em_init,
           std::size_t replicates, double confidence, std::uint64_t seed, std::size_t threads) {
            const Dataset d = to_dataset(data, precomputed);
            const FilterValues f = to_filter(filter);
            const auto pp = params_from(mode, n, alpha, p, eps, min_samples, precomputed,
                                        em_config(em_init, 5, 1e-8, 500, seed));
            BootstrapConfig bc;
            bc.replicates = replicates;
            bc.confidence = confidence;
            bc.seed = seed;
            bc.threads = threads;
            py::gil_scoped_release release;
            return report_to_json(evaluate(d, f, pp, bc), true).dump();
        },
        py::arg("data"), py::arg("filter"), py::arg("mode") = "dmapper", py::arg("n") = 10,
        py::arg("alpha") = py::none(), py::arg("p") = py::none(), py::arg("eps") = 0.5, py::arg("min_samples") = 3,
        py::arg("precomputed") = false, py::arg("em_init") = "quantile", py::arg("replicates") = 100,
        py::arg("confidence") = 0.85, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "extended_diagram",
        [](std::size_t n_vertices, const EdgeList& edges, std::vector<double> values, bool keep_zero) {
            return diagram_tuples(extended_diagram(n_vertices, edges, values, keep_zero));
        },
        py::arg("n_vertices"), py::arg("edges"), py::arg("values"), py::arg("keep_zero") = false);

    m.def(
        "bottleneck",
        [](const std::vector<std::tuple<std::string, double, double>>& a,
           const std::vector<std::tuple<std::string, double, double>>& b) {
            return bottleneck(diagram_from_tuples(a), diagram_from_tuples(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "kmer_distance",
        [](const std::vector<std::string>& sequences, std::size_t k, bool scale) {
            std::vector<KmerVector> vecs;
            for (std::size_t i = 0; i < sequences.size(); ++i) vecs.push_back(kmer_freq({std::to_string(i), sequences[i]}, k));
            DistanceMatrix dm = pairwise_distance(vecs);
            if (scale) dm = minmax_scale(dm);
            const std::size_t n = dm.size();
            Array out({n, n});
            std::copy(dm.entries().begin(), dm.entries().end(), out.mutable_data());
            return out;
        },
        py::arg("sequences"), py::arg("k") = 3, py::arg("scale") = false);

    m.def(
        "two_circles",
        [](double cx, std::size_t count_each, std::uint64_t seed) {
            const PointCloud pc = gen_two_circles({0, 0}, {cx, 0}, 1.0, count_each, seed);
            Array out({pc.size(), pc.dim()});
            std::copy(pc.coords().begin(), pc.coords().end(), out.mutable_data());
            return out;
        },
        py::arg("cx") = 3.0, py::arg("count_each") = 5000, py::arg("seed") = 0);
}
