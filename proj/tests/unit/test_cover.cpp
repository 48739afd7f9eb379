#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "dmapper/cover.hpp"
#include "dmapper/error.hpp"
#include "dmapper/mixture.hpp"

using namespace dmapper;

namespace {

GaussianMixture1D random_model(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> um(-10, 10), us(0.05, 3), uw(0.1, 1);
    std::vector<double> w(k), m(k), s(k);
    double t = 0;
    for (std::size_t i = 0; i < k; ++i) {
        w[i] = uw(rng);
        t += w[i];
        m[i] = um(rng);
        s[i] = us(rng);
    }
    for (double& x : w) x /= t;
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return GaussianMixture1D(w, m, s);
}

// Root of F_i^{-1}(1 - a/2) = F_{i+1}^{-1}(a/2) found with the oracle quantile.
double pair_alpha_oracle(const GaussianMixture1D& g, std::size_t i) {
    auto gap = [&](double a) {
        return (g.means()[i] + g.stddevs()[i] * oracle::normal_quantile(1 - a / 2)) -
               (g.means()[i + 1] + g.stddevs()[i + 1] * oracle::normal_quantile(a / 2));
    };
    double lo = 1e-15, hi = 1.0 - 1e-15;
    if (gap(hi) >= 0) return 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) >= 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("quantile cover of a standard normal") {
    const GaussianMixture1D g({1.0}, {0.0}, {1.0});
    const auto c = quantile_cover(g, 0.1);
    REQUIRE(c.intervals.size() == 1);
    CHECK(c.intervals[0].start == doctest::Approx(-1.6449).epsilon(1e-4));
    CHECK(c.intervals[0].end == doctest::Approx(1.6449).epsilon(1e-4));
    CHECK(std::abs(c.intervals[0].end - oracle::normal_quantile(0.95)) < 1e-10);
    CHECK(c.mode == CoverMode::DMapper);
    CHECK(c.param == 0.1);
    CHECK_THROWS_AS(quantile_cover(g, 0.0), ConfigError);
    CHECK_THROWS_AS(quantile_cover(g, 1.0), ConfigError);
}

TEST_CASE("two components: overlap below the bound, gap above it") {
    const GaussianMixture1D g({0.5, 0.5}, {0, 3}, {1, 1});
    const auto tight = quantile_cover(g, 0.01);
    CHECK(tight.intervals[0].end >= tight.intervals[1].start);
    const auto loose = quantile_cover(g, 0.2);
    CHECK(loose.intervals[0].end < loose.intervals[1].start);
    // gap confirmed through the oracle quantile too
    CHECK(oracle::normal_quantile(0.9) < 3 + oracle::normal_quantile(0.1));
}

TEST_CASE("alpha upper bound") {
    const GaussianMixture1D g({0.5, 0.5}, {0, 3}, {1, 1});
    CHECK(alpha_upper_bound(g, 0.005) == doctest::Approx(0.1336).epsilon(1e-3 / 0.1336));
    CHECK(std::abs(alpha_upper_bound(g, 0.005) - pair_alpha_oracle(g, 0)) < 1e-9);
    CHECK(std::abs(pair_alpha_bisection(g, 0) - pair_alpha_closed_form(g, 0)) < 1e-9);
    CHECK(std::abs(alpha_upper_bound(g, 0.005) - 2 * (1 - oracle::normal_cdf(1.5))) < 1e-12);

    const GaussianMixture1D same({0.5, 0.5}, {1, 1}, {2, 2});
    CHECK(pair_alpha_closed_form(same, 0) == 1.0);
    CHECK(alpha_upper_bound(same, 0.005) == 1.0);

    const GaussianMixture1D far({0.5, 0.5}, {0, 8}, {1, 1});
    const auto d = alpha_upper_bound_detail(far, 0.005);
    CHECK(d.pair_alpha[0] == doctest::Approx(6.3e-5).epsilon(0.01));
    CHECK_FALSE(d.included[0]);
    CHECK(d.alpha == 1.0);

    CHECK_THROWS_AS(alpha_upper_bound(GaussianMixture1D({1.0}, {0.0}, {1.0}), 0.005), ConfigError);
    CHECK_THROWS_AS(alpha_upper_bound(g, 0.0), ConfigError);
}

TEST_CASE("closed form matches bisection oracle on random models") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 100; ++rep) {
        const auto g = random_model(rng, 2 + rep % 5);
        for (std::size_t i = 0; i + 1 < g.n_components(); ++i) {
            const double cf = pair_alpha_closed_form(g, i);
            if (cf < 1e-10) continue;  // far tails, relative comparison meaningless
            CHECK(std::abs(cf - pair_alpha_oracle(g, i)) < 1e-8);
            CHECK(std::abs(cf - pair_alpha_bisection(g, i)) < 1e-8);
        }
    }
}

TEST_CASE("alpha below the bound keeps every included pair overlapping") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int rep = 0; rep < 100; ++rep) {
        const auto g = random_model(rng, 2 + static_cast<std::size_t>(rep % 5));
        const auto bound = alpha_upper_bound_detail(g, 0.005);
        for (int s = 0; s < 20; ++s) {
            const double a = bound.alpha * (0.001 + 0.998 * u01(rng));
            const auto c = quantile_cover(g, a);
            for (std::size_t i = 0; i + 1 < c.intervals.size(); ++i) {
                if (!bound.included[i]) continue;
                CHECK(c.intervals[i].end >= c.intervals[i + 1].start);
            }
        }
    }
}

TEST_CASE("quantile covers nest as alpha grows") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        const auto g = random_model(rng, 4);
        double a1 = 0.01 + 0.4 * std::uniform_real_distribution<double>(0, 1)(rng);
        double a2 = a1 + 0.3;
        const auto wide = quantile_cover(g, a1), narrow = quantile_cover(g, a2);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(wide.intervals[i].start <= narrow.intervals[i].start);
            CHECK(wide.intervals[i].end >= narrow.intervals[i].end);
        }
    }
}

TEST_CASE("uniform cover") {
    const FilterValues v({0, 3, 10});
    auto c = uniform_cover(v, 2, 0.0);
    CHECK(c.intervals == std::vector<Interval>{{0, 5}, {5, 10}});
    c = uniform_cover(v, 2, 1.0 / 3);
    CHECK(c.intervals[0].start == 0);
    CHECK(c.intervals[0].end == doctest::Approx(6));
    CHECK(c.intervals[1].start == doctest::Approx(4));
    CHECK(c.intervals[1].end == 10);
    c = uniform_cover(v, 1, 0.4);
    CHECK(c.intervals == std::vector<Interval>{{0, 10}});
    CHECK_THROWS_AS(uniform_cover(FilterValues({2, 2}), 3, 0.1), DataError);
    CHECK_THROWS_AS(uniform_cover(v, 3, 1.0), ConfigError);
    CHECK_THROWS_AS(uniform_cover(v, 0, 0.1), ConfigError);
}

TEST_CASE("uniform cover overlap ratio equals p") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-50, 50), up(0, 0.95);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> vals(20);
        for (double& x : vals) x = u(rng);
        const std::size_t n = 1 + rep % 15;
        const double p = up(rng);
        const auto c = uniform_cover(FilterValues(vals), n, p);
        const double lo = *std::min_element(vals.begin(), vals.end());
        const double hi = *std::max_element(vals.begin(), vals.end());
        const double L = (hi - lo) / (n - (n - 1) * p);
        CHECK(c.intervals.front().start == lo);
        CHECK(c.intervals.back().end == hi);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double overlap = c.intervals[i].end - c.intervals[i + 1].start;
            CHECK(std::abs(overlap / L - p) < 1e-9);
        }
        CHECK(coverage_check(c, FilterValues(vals)).empty());
    }
}

TEST_CASE("pullback and coverage") {
    Cover c{CoverMode::Classic, 2, 0.0, {{0, 1}, {1, 2}}};
    const auto sets = pullback(c, FilterValues({0, 1, 2}));
    CHECK(sets == std::vector<IndexSet>{{0, 1}, {1, 2}});
    Cover one{CoverMode::Classic, 1, 0.0, {{0, 1}}};
    CHECK(pullback(one, FilterValues({-5})) == std::vector<IndexSet>{{}});
    CHECK(coverage_check(one, FilterValues({-5})) == std::vector<std::size_t>{0});
    CHECK(coverage_check(one, FilterValues({0.5})).empty());

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<double> vals(300);
    for (double& x : vals) x = u(rng);
    Cover rnd{CoverMode::Classic, 4, 0.0, {{0, 2.5}, {2, 6}, {5.5, 7}, {8, 9}}};
    const auto ps = pullback(rnd, FilterValues(vals));
    for (std::size_t k = 0; k < 4; ++k) {
        IndexSet expect;
        for (std::size_t j = 0; j < vals.size(); ++j) {
            if (vals[j] >= rnd.intervals[k].start && vals[j] <= rnd.intervals[k].end) expect.push_back(j);
        }
        CHECK(ps[k] == expect);
    }
}

TEST_CASE("D-Mapper cover at small alpha covers its training data") {
    std::mt19937_64 rng(15);
    std::normal_distribution<double> a(0, 1), b(6, 1.5);
    std::vector<double> v;
    for (int i = 0; i < 500; ++i) v.push_back(i % 2 ? a(rng) : b(rng));
    const auto g = fit_gmm(v, 2, EmConfig{});
    const auto c = quantile_cover(g, 1e-4);
    CHECK(coverage_check(c, FilterValues(v)).empty());
}

TEST_CASE("cover mode parsing") {
    CHECK(parse_cover_mode("classic") == CoverMode::Classic);
    CHECK(parse_cover_mode("dmapper") == CoverMode::DMapper);
    CHECK(to_string(CoverMode::DMapper) == "dmapper");
    CHECK_THROWS_AS(parse_cover_mode("fuzzy"), ConfigError);
}
