#include <filesystem>
#include <random>

#include "doctest.h"

#include "dmapper/core_data.hpp"
#include "dmapper/error.hpp"

using namespace dmapper;

TEST_CASE("project_axis extracts a coordinate") {
    const auto pc = PointCloud::from_rows({{1, 2}, {3, 4}});
    CHECK(project_axis(pc, 0) == FilterValues(std::vector<double>{1, 3}));
    CHECK(project_axis(pc, 1) == FilterValues(std::vector<double>{2, 4}));
    CHECK_THROWS_AS(project_axis(PointCloud::from_rows({{5}}), 2), ConfigError);
}

TEST_CASE("coordinate_sum") {
    CHECK(coordinate_sum(PointCloud::from_rows({{1, 2, 3}})) == FilterValues(std::vector<double>{6}));
    CHECK(coordinate_sum(PointCloud::from_rows({{0, 0}})) == FilterValues(std::vector<double>{0}));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5, 5);
    std::vector<std::vector<double>> rows(10, std::vector<double>(3));
    for (auto& r : rows) {
        for (auto& x : r) x = u(rng);
    }
    const auto f = coordinate_sum(PointCloud::from_rows(rows));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        // reverse-order accumulation
        const double expect = rows[i][2] + rows[i][1] + rows[i][0];
        CHECK(f[i] == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("mean_distance_filter divides by n including the diagonal") {
    CHECK(mean_distance_filter(DistanceMatrix(2, {0, 2, 2, 0})) == FilterValues(std::vector<double>{1, 1}));
    CHECK(mean_distance_filter(DistanceMatrix(1, {0})) == FilterValues(std::vector<double>{0}));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 3);
    const std::size_t n = 5;
    std::vector<double> e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = e[j * n + i] = u(rng);
    }
    const auto f = mean_distance_filter(DistanceMatrix(n, e));
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = n; j-- > 0;) s += e[i * n + j];
        CHECK(f[i] == doctest::Approx(s / n).epsilon(1e-14));
    }
}

TEST_CASE("minmax_scale maps off-diagonal entries onto [0,1]") {
    const auto two = minmax_scale(DistanceMatrix(3, {0, 2, 4, 2, 0, 3, 4, 3, 0}));
    CHECK(two(0, 1) == 0.0);
    CHECK(two(0, 2) == 1.0);
    CHECK(two(1, 2) == 0.5);
    CHECK(two(2, 2) == 0.0);
    CHECK(two(1, 0) == two(0, 1));

    const auto pair = minmax_scale(DistanceMatrix(3, {0, 2, 2, 2, 0, 4, 2, 4, 0}));
    CHECK(pair(0, 1) == 0.0);
    CHECK(pair(1, 2) == 1.0);

    CHECK_THROWS_AS(minmax_scale(DistanceMatrix(3, {0, 1, 1, 1, 0, 1, 1, 1, 0})), DataError);
    CHECK_THROWS_AS(minmax_scale(DistanceMatrix(1, {0})), DataError);
}

TEST_CASE("minmax_scale pins exact extremes on random matrices") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.3, 0.31);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 6;
        std::vector<double> e(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) e[i * n + j] = e[j * n + i] = u(rng);
        }
        const auto s = minmax_scale(DistanceMatrix(n, e));
        double lo = 2, hi = -1;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(s(i, i) == 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(s(i, j) == s(j, i));
                if (i != j) {
                    lo = std::min(lo, s(i, j));
                    hi = std::max(hi, s(i, j));
                }
            }
        }
        CHECK(lo == 0.0);
        CHECK(hi == 1.0);
    }
}

TEST_CASE("container invariants are enforced") {
    CHECK_THROWS_AS(PointCloud(0, 2, {}), DataError);
    CHECK_THROWS_AS(PointCloud::from_rows({{1, std::nan("")}}), DataError);
    CHECK_THROWS_AS(DistanceMatrix(2, {0, 1, 2, 0}), DataError);   // asymmetric
    CHECK_THROWS_AS(DistanceMatrix(2, {1, 1, 1, 0}), DataError);   // diagonal
    CHECK_THROWS_AS(DistanceMatrix(2, {0, -1, -1, 0}), DataError); // negative
    CHECK_THROWS_AS(FilterValues({1.0, INFINITY}), DataError);
}

TEST_CASE("filters are pure") {
    const auto pc = PointCloud::from_rows({{0.1, 0.2, 0.3}, {1.5, -2.25, 7}});
    CHECK(coordinate_sum(pc) == coordinate_sum(pc));
    CHECK(project_axis(pc, 2) == project_axis(pc, 2));
}

TEST_CASE("CSV round trips are bit exact") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> rows(7, std::vector<double>(3));
    for (auto& r : rows) {
        for (auto& x : r) x = g(rng) * 1e3;
    }
    const auto pc = PointCloud::from_rows(rows);
    const auto path = std::filesystem::temp_directory_path() / "dmapper_core_rt.csv";
    write_points_csv(path, pc);
    const auto back = read_points_csv(path);
    REQUIRE(back.size() == pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(back.at(i, j) == pc.at(i, j));
    }
    std::filesystem::remove(path);

    const auto dm = DistanceMatrix(3, {0, 0.1, 1.0 / 3, 0.1, 0, 2, 1.0 / 3, 2, 0});
    const auto dpath = std::filesystem::temp_directory_path() / "dmapper_core_dm.csv";
    write_distance_csv(dpath, dm);
    const auto dback = read_distance_csv(dpath);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(dback(i, j) == dm(i, j));
    }
    std::filesystem::remove(dpath);
}

TEST_CASE("CSV parsing") {
    const auto pc = parse_points_csv("x,y\n1,2\n3,4\n", true);
    CHECK(pc.size() == 2);
    CHECK(pc.at(1, 1) == 4);
    CHECK(parse_points_csv("1 2\r\n3 4\r\n").at(1, 0) == 3);
    CHECK_THROWS_WITH_AS(parse_points_csv("1,2\n3,x\n"), doctest::Contains("line 2"), DataError);
    CHECK_THROWS_AS(parse_points_csv("1,2\n3\n"), DataError);
    CHECK_THROWS_AS(parse_points_csv(""), DataError);
    CHECK_THROWS_AS(parse_distance_csv("0,1\n1,0,2\n"), DataError);
}
