#pragma once
// One-dimensional Gaussian mixtures fitted by expectation maximization. The
// fitted components are kept sorted by mean because covers are built from
// the i-th ordered component.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dmapper {

/// Starting point of each EM run. KMeans runs Lloyd iterations from the
/// quantile (or random) means and starts each component at its cluster's
/// weight and spread.
enum class EmInit { Quantile, KMeans };

std::string to_string(EmInit init);
EmInit parse_em_init(const std::string& text);

struct EmConfig {
    int max_iters = 500;
    double rel_tol = 1e-8;
    /// Lower bound on component variance; unset means 1e-6 * (data range)^2.
    std::optional<double> variance_floor;
    int n_init = 5;
    std::uint64_t seed = 0;
    EmInit init = EmInit::Quantile;

    void validate() const;
};

class GaussianMixture1D {
public:
    GaussianMixture1D() = default;
    /// Components are re-sorted by mean (stable) on construction.
    GaussianMixture1D(std::vector<double> weights, std::vector<double> means, std::vector<double> stddevs);

    std::size_t n_components() const { return means_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& stddevs() const { return stddevs_; }

    bool operator==(const GaussianMixture1D&) const = default;

private:
    std::vector<double> weights_;
    std::vector<double> means_;
    std::vector<double> stddevs_;
};

/// Per-restart record of an EM run, for diagnostics and tests.
struct EmTrace {
    struct Run {
        std::vector<double> log_likelihood;  // one entry per E-step
        std::vector<std::size_t> reinit_at;  // iterations where a collapsed component was re-seeded
        double max_resp_row_error = 0.0;     // worst |sum_k r_ik - 1| seen
        bool converged = false;
    };
    std::vector<Run> runs;
    std::size_t best_run = 0;
};

GaussianMixture1D fit_gmm(std::span<const double> values, std::size_t n, const EmConfig& cfg,
                          EmTrace* trace = nullptr);

double log_likelihood(const GaussianMixture1D& gmm, std::span<const double> values);

/// Inverse CDF of the i-th (sorted) component.
double component_quantile(const GaussianMixture1D& gmm, std::size_t i, double q);
double component_cdf(const GaussianMixture1D& gmm, std::size_t i, double x);

double normal_cdf(double z);
double normal_quantile(double q);

}  // namespace dmapper
