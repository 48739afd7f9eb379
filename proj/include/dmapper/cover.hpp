#pragma once
// Interval covers of the filter range: quantile covers from a fitted mixture,
// the upper bound on the quantile level that keeps adjacent intervals
// overlapping, and the classic equal-length cover.

#include <cstddef>
#include <string>
#include <vector>

#include "dmapper/core_data.hpp"
#include "dmapper/mixture.hpp"

namespace dmapper {

struct Interval {
    double start = 0.0;
    double end = 0.0;

    bool contains(double x) const { return start <= x && x <= end; }
    bool operator==(const Interval&) const = default;
};

enum class CoverMode { Classic, DMapper };

std::string to_string(CoverMode mode);
CoverMode parse_cover_mode(const std::string& text);

struct Cover {
    CoverMode mode = CoverMode::Classic;
    std::size_t n = 0;
    double param = 0.0;  // alpha for DMapper, overlap ratio p for Classic
    std::vector<Interval> intervals;

    bool operator==(const Cover&) const = default;
};

/// Interval i spans [F_i^{-1}(alpha/2), F_i^{-1}(1 - alpha/2)] of the i-th component.
Cover quantile_cover(const GaussianMixture1D& gmm, double alpha);

/// Level alpha at which the intervals of components i and i+1 just touch.
/// Closed form for Gaussian components, clamped to (0, 1].
double pair_alpha_closed_form(const GaussianMixture1D& gmm, std::size_t i);
/// Same quantity found by bisection on the quantile functions, bracket
/// (1e-12, 1 - 1e-12).
double pair_alpha_bisection(const GaussianMixture1D& gmm, std::size_t i);

struct AlphaBound {
    double alpha = 1.0;                   // min over included pairs, or 1 when none is included
    std::vector<double> pair_alpha;       // per adjacent pair
    std::vector<bool> included;           // pair_alpha >= alpha_star
};

AlphaBound alpha_upper_bound_detail(const GaussianMixture1D& gmm, double alpha_star);
double alpha_upper_bound(const GaussianMixture1D& gmm, double alpha_star);

/// n equal-length intervals over [min, max] whose neighbours overlap by p * L.
Cover uniform_cover(const FilterValues& values, std::size_t n, double p);

using IndexSet = std::vector<std::size_t>;

/// Preimage of every interval (closed membership), indices ascending.
std::vector<IndexSet> pullback(const Cover& cover, const FilterValues& values);

/// Indices whose value lies in no interval.
std::vector<std::size_t> coverage_check(const Cover& cover, const FilterValues& values);

}  // namespace dmapper
