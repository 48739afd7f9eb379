#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "dmapper/error.hpp"
#include "dmapper/mapper_graph.hpp"
#include "dmapper/pipeline.hpp"

using namespace dmapper;

namespace {

IndexSet all_of(std::size_t n) {
    IndexSet s(n);
    std::iota(s.begin(), s.end(), 0);
    return s;
}

Dataset line(std::vector<double> xs) {
    std::vector<std::vector<double>> rows;
    for (double x : xs) rows.push_back({x});
    return Dataset(PointCloud::from_rows(rows));
}

}  // namespace

TEST_CASE("dbscan on a line") {
    const Dataset d = line({0, 0.1, 0.2, 5, 5.1, 5.2, 10});
    const auto labels = dbscan(d, all_of(7), {0.15, 2, Metric::Euclidean});
    CHECK(labels == std::vector<int>{0, 0, 0, 1, 1, 1, kNoise});
    // min_samples counts the point itself
    CHECK(dbscan(d, all_of(7), {0.15, 1, Metric::Euclidean}) == std::vector<int>{0, 0, 0, 1, 1, 1, 2});
    CHECK_THROWS_AS(dbscan(d, {}, {0.15, 2, Metric::Euclidean}), DataError);
}

TEST_CASE("dbscan border point joins the lowest-position core neighbour") {
    // 0.5 is border to both groups
    const Dataset d = line({0, 0.05, 0.1, 0.2, 0.5, 0.8, 0.9, 0.95, 1.0});
    const auto labels = dbscan(d, all_of(9), {0.31, 4, Metric::Euclidean});
    CHECK(labels == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1});
    // reversed positions flip the tie
    const Dataset r = line({1.0, 0.95, 0.9, 0.8, 0.5, 0.2, 0.1, 0.05, 0});
    CHECK(dbscan(r, all_of(9), {0.31, 4, Metric::Euclidean}) == std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1});
}

TEST_CASE("dbscan on a subset uses only subset neighbours") {
    const Dataset d = line({0, 0.1, 0.2, 0.3});
    CHECK(dbscan(d, {0, 3}, {0.15, 2, Metric::Euclidean}) == std::vector<int>{kNoise, kNoise});
    CHECK(dbscan(d, {2, 3}, {0.15, 2, Metric::Euclidean}) == std::vector<int>{0, 0});
}

TEST_CASE("dbscan matches the quadratic oracle") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t dim = 1 + rep % 6;  // grid path for dim <= 4, brute force above
        const std::size_t n = 40 + rep * 3;
        std::uniform_real_distribution<double> u(0, 3);
        std::vector<double> c(n * dim);
        for (double& x : c) x = u(rng);
        const Dataset d(PointCloud(n, dim, c));
        IndexSet subset;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng() % 3) subset.push_back(i);
        }
        const double eps = 0.2 + 0.1 * (rep % 7);
        const std::size_t ms = 1 + rep % 5;
        CHECK(dbscan(d, subset, {eps, ms, Metric::Euclidean}) == oracle::dbscan(d, subset, eps, ms));
    }
}

TEST_CASE("dbscan with a precomputed matrix") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    const std::size_t n = 30;
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = e[j * n + i] = u(rng);
    }
    const Dataset d(DistanceMatrix(n, e));
    CHECK(dbscan(d, all_of(n), {0.2, 3, Metric::Precomputed}) == oracle::dbscan(d, all_of(n), 0.2, 3));
}

TEST_CASE("dbscan metric and parameter errors") {
    const Dataset pts = line({0, 1});
    const Dataset mat(DistanceMatrix(2, {0, 1, 1, 0}));
    CHECK_THROWS_AS(dbscan(pts, all_of(2), {0.5, 2, Metric::Precomputed}), ConfigError);
    CHECK_THROWS_AS(dbscan(mat, all_of(2), {0.5, 2, Metric::Euclidean}), ConfigError);
    CHECK_THROWS_AS(dbscan(pts, all_of(2), {0.0, 2, Metric::Euclidean}), ConfigError);
    CHECK_THROWS_AS(dbscan(pts, all_of(2), {0.5, 0, Metric::Euclidean}), ConfigError);
    CHECK(parse_metric("precomputed") == Metric::Precomputed);
    CHECK_THROWS_AS(parse_metric("cosine"), ConfigError);
}

TEST_CASE("nerve of two overlapping preimages") {
    const FilterValues f({0, 1, 2, 3, 4});
    auto single = [](const IndexSet& s) { return std::vector<int>(s.size(), 0); };
    const auto g = build_nerve({{0, 1, 2}, {2, 3, 4}}, single, f);
    REQUIRE(g.nodes.size() == 2);
    CHECK(g.nodes[0].members == std::vector<std::size_t>{0, 1, 2});
    CHECK(g.nodes[1].interval_index == 1);
    CHECK(g.nodes[0].mean_filter == doctest::Approx(1));
    CHECK(g.nodes[1].mean_filter == doctest::Approx(3));
    CHECK(g.edges == EdgeList{{0, 1}});
}

TEST_CASE("nerve drops noise and splits clusters") {
    const FilterValues f({0, 1, 2, 3, 4, 5});
    // labels by position: first preimage -> {0,1}, {2}, noise 3
    auto fn = [](const IndexSet& s) {
        if (s.size() == 4) return std::vector<int>{0, 0, 1, kNoise};
        return std::vector<int>(s.size(), 0);
    };
    const auto g = build_nerve({{0, 1, 2, 3}, {2, 4, 5}, {}}, fn, f);
    REQUIRE(g.nodes.size() == 3);
    CHECK(g.dropped_noise == 1);
    CHECK(g.nodes[1].members == std::vector<std::size_t>{2});
    CHECK(g.edges == EdgeList{{1, 2}});
}

TEST_CASE("nerve edges equal pairwise intersections") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 60;
        std::vector<double> v(n);
        std::uniform_real_distribution<double> u(0, 1);
        for (double& x : v) x = u(rng);
        std::vector<IndexSet> pre(5);
        for (auto& s : pre) {
            for (std::size_t i = 0; i < n; ++i) {
                if (rng() % 4 == 0) s.push_back(i);
            }
        }
        // cluster by parity of index, with noise at multiples of 7
        auto fn = [](const IndexSet& s) {
            std::vector<int> l;
            for (std::size_t i : s) l.push_back(i % 7 == 0 ? kNoise : static_cast<int>(i % 2));
            return l;
        };
        const auto g = build_nerve(pre, fn, FilterValues(v));
        EdgeList expect;
        for (std::size_t a = 0; a < g.nodes.size(); ++a) {
            CHECK(std::is_sorted(g.nodes[a].members.begin(), g.nodes[a].members.end()));
            CHECK(g.nodes[a].id == a);
            for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
                std::vector<std::size_t> common;
                std::set_intersection(g.nodes[a].members.begin(), g.nodes[a].members.end(),
                                      g.nodes[b].members.begin(), g.nodes[b].members.end(),
                                      std::back_inserter(common));
                if (!common.empty()) expect.emplace_back(a, b);
            }
        }
        CHECK(g.edges == expect);
    }
}

TEST_CASE("node values") {
    const FilterValues f({1, 2, 3, 10});
    MapperGraph g;
    g.nodes.push_back({0, {0, 1, 2}, 0, 0});
    g.nodes.push_back({1, {3}, 0, 0});
    const auto v = node_values(g, f);
    CHECK(v == std::vector<double>{2, 10});
    CHECK(g.nodes[1].mean_filter == 10);
}

TEST_CASE("graph summary agrees with a DFS count") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rep % 25;
        const auto edges = oracle::random_graph(n, 0.08 + 0.002 * rep, rng);
        MapperGraph g;
        for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({i, {i}, 0, 0});
        g.edges = edges;
        const auto s = graph_summary(g);
        const std::size_t comps = oracle::dfs_components(n, edges);
        CHECK(s.components == comps);
        CHECK(s.cycle_rank == edges.size() + comps - n);
        CHECK(s.node_count == n);
        CHECK(s.edge_count == edges.size());
    }
    CHECK(graph_summary(MapperGraph{}).components == 0);
}

TEST_CASE("component labels numbered by smallest node") {
    CHECK(component_labels(5, {{1, 3}, {0, 4}}) == std::vector<std::size_t>{0, 1, 2, 1, 0});
}

TEST_CASE("pipeline on two separated blobs is deterministic") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd(0, 0.1);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 200; ++i) rows.push_back({(i % 2 ? 0.0 : 4.0) + nd(rng), nd(rng)});
    const Dataset d(PointCloud::from_rows(rows));
    const FilterValues f = project_axis(d.points(), 0);
    PipelineParams pp;
    pp.mode = CoverMode::Classic;
    pp.n = 4;
    pp.p = 0.2;
    pp.dbscan.eps = 0.3;
    const auto a = run_mapper(d, f, pp);
    const auto b = run_mapper(d, f, pp);
    CHECK(a.graph.edges == b.graph.edges);
    CHECK(a.graph.nodes.size() == b.graph.nodes.size());
    CHECK(graph_summary(a.graph).components == 2);
    CHECK(a.uncovered.empty());
}
