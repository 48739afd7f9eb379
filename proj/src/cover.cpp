#include "dmapper/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dmapper/error.hpp"

namespace dmapper {

std::string to_string(CoverMode mode) { return mode == CoverMode::Classic ? "classic" : "dmapper"; }

CoverMode parse_cover_mode(const std::string& text) {
    if (text == "classic") return CoverMode::Classic;
    if (text == "dmapper") return CoverMode::DMapper;
    throw ConfigError("mode must be 'classic' or 'dmapper', got '" + text + "'");
}

Cover quantile_cover(const GaussianMixture1D& gmm, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    Cover c{CoverMode::DMapper, gmm.n_components(), alpha, {}};
    for (std::size_t i = 0; i < gmm.n_components(); ++i) {
        c.intervals.push_back({component_quantile(gmm, i, alpha / 2.0), component_quantile(gmm, i, 1.0 - alpha / 2.0)});
    }
    return c;
}

double pair_alpha_closed_form(const GaussianMixture1D& gmm, std::size_t i) {
    if (i + 1 >= gmm.n_components()) throw ConfigError("pair index out of range");
    const double gap = gmm.means()[i + 1] - gmm.means()[i];
    const double z = gap / (gmm.stddevs()[i] + gmm.stddevs()[i + 1]);
    // 2 (1 - Phi(z)) without cancellation
    const double a = std::erfc(z / std::numbers::sqrt2);
    return std::clamp(a, std::numeric_limits<double>::min(), 1.0);
}

double pair_alpha_bisection(const GaussianMixture1D& gmm, std::size_t i) {
    if (i + 1 >= gmm.n_components()) throw ConfigError("pair index out of range");
    // g(alpha) = upper end of interval i minus lower end of interval i+1;
    // decreasing in alpha, positive means overlap.
    const auto g = [&](double a) {
        return component_quantile(gmm, i, 1.0 - a / 2.0) - component_quantile(gmm, i + 1, a / 2.0);
    };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    if (g(lo) <= 0.0) return lo;
    if (g(hi) >= 0.0) return 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

AlphaBound alpha_upper_bound_detail(const GaussianMixture1D& gmm, double alpha_star) {
    if (gmm.n_components() < 2) throw ConfigError("alpha upper bound needs at least two components");
    if (!(alpha_star > 0.0 && alpha_star < 1.0)) throw ConfigError("alpha_star must lie in (0, 1)");
    AlphaBound out;
    for (std::size_t i = 0; i + 1 < gmm.n_components(); ++i) {
        const double a = pair_alpha_closed_form(gmm, i);
        out.pair_alpha.push_back(a);
        out.included.push_back(a >= alpha_star);
        if (a >= alpha_star) out.alpha = std::min(out.alpha, a);
    }
    return out;
}

double alpha_upper_bound(const GaussianMixture1D& gmm, double alpha_star) {
    return alpha_upper_bound_detail(gmm, alpha_star).alpha;
}

Cover uniform_cover(const FilterValues& values, std::size_t n, double p) {
    if (n == 0) throw ConfigError("cover needs at least one interval");
    if (!(p >= 0.0 && p < 1.0)) throw ConfigError("overlap ratio p must lie in [0, 1)");
    if (values.size() == 0) throw DataError("cannot build a cover over no values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw DataError("filter values have zero range");
    const double nn = static_cast<double>(n);
    const double len = (hi - lo) / (nn - (nn - 1.0) * p);
    const double stride = len * (1.0 - p);
    Cover c{CoverMode::Classic, n, p, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const double s = lo + static_cast<double>(i) * stride;
        c.intervals.push_back({s, s + len});
    }
    c.intervals.back().end = hi;  // absorb rounding so the max point stays covered
    return c;
}

std::vector<IndexSet> pullback(const Cover& cover, const FilterValues& values) {
    std::vector<IndexSet> sets(cover.intervals.size());
    for (std::size_t k = 0; k < cover.intervals.size(); ++k) {
        const Interval& iv = cover.intervals[k];
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (iv.contains(values[j])) sets[k].push_back(j);
        }
    }
    return sets;
}

std::vector<std::size_t> coverage_check(const Cover& cover, const FilterValues& values) {
    std::vector<std::size_t> missing;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const bool hit = std::any_of(cover.intervals.begin(), cover.intervals.end(),
                                     [&](const Interval& iv) { return iv.contains(values[j]); });
        if (!hit) missing.push_back(j);
    }
    return missing;
}

}  // namespace dmapper
